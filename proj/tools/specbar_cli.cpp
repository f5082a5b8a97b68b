#include "specbar/cli/cli.hpp"

int main(int argc, char** argv) { return specbar::cli::run(argc, argv); }
