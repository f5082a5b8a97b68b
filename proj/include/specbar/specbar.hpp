#pragma once

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/geometry.hpp"
#include "specbar/core/jet.hpp"
#include "specbar/core/model_io.hpp"
#include "specbar/core/parallel.hpp"
#include "specbar/core/potential.hpp"
#include "specbar/enclosures/enclosures.hpp"
#include "specbar/fdtrunc/fdtrunc.hpp"
#include "specbar/floquet/floquet.hpp"
#include "specbar/harness/harness.hpp"
#include "specbar/io/csv.hpp"
#include "specbar/io/svg.hpp"
#include "specbar/rootfinder/rootfinder.hpp"
#include "specbar/sturm/propagate.hpp"
#include "specbar/sturm/reference.hpp"
#include "specbar/sturm/sturm.hpp"
