#pragma once

// JSON model files.
//
//   {
//     "pieces": [ {"x_lo": 0, "x_hi": 4.7, "kind": "const", "params": [0, 1]} ],
//     "tail":   {"kind": "periodic", "period": 6.283185307179586, "X": 0,
//                "expr": {"kind": "sin", "params": [1, 1, 0]}},
//     "eta":    [0, 0]
//   }
//
// "const" params are [re, im] (a single number means im = 0); "sin" params
// are [amplitude, frequency, phase]. "tail" may be {"kind": "zero"}; both
// "tail" and "eta" are optional (zero tail, Dirichlet condition).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "specbar/core/potential.hpp"

namespace specbar {

namespace detail {

inline Expression parse_expression(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto& p = j.at("params");
  if (kind == "const") {
    if (p.is_number()) return Constant{cdouble(p.get<double>(), 0.0)};
    if (!p.is_array() || p.empty() || p.size() > 2) throw ModelError("const params must be [re] or [re, im]");
    return Constant{cdouble(p[0].get<double>(), p.size() == 2 ? p[1].get<double>() : 0.0)};
  }
  if (kind == "sin") {
    if (!p.is_array() || p.size() != 3) throw ModelError("sin params must be [amplitude, frequency, phase]");
    return Sinusoid{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
  }
  throw ModelError("unknown expression kind '" + kind + "'");
}

inline nlohmann::json dump_expression(const Expression& e) {
  if (const auto* c = std::get_if<Constant>(&e))
    return {{"kind", "const"}, {"params", {c->value.real(), c->value.imag()}}};
  const auto& s = std::get<Sinusoid>(e);
  return {{"kind", "sin"}, {"params", {s.amplitude, s.frequency, s.phase}}};
}

}  // namespace detail

inline PotentialModel model_from_json(const nlohmann::json& j) {
  try {
    std::vector<Piece> pieces;
    if (j.contains("pieces")) {
      for (const auto& pj : j.at("pieces")) {
        Piece p;
        p.x_lo = pj.at("x_lo").get<double>();
        p.x_hi = pj.at("x_hi").get<double>();
        p.expr = detail::parse_expression(pj);
        pieces.push_back(p);
      }
    }
    Tail tail = ZeroTail{};
    if (j.contains("tail")) {
      const auto& tj = j.at("tail");
      const std::string kind = tj.at("kind").get<std::string>();
      if (kind == "periodic") {
        PeriodicTail t;
        t.period = tj.at("period").get<double>();
        t.start = tj.value("X", 0.0);
        t.expr = detail::parse_expression(tj.at("expr"));
        tail = t;
      } else if (kind != "zero") {
        throw ModelError("unknown tail kind '" + kind + "'");
      }
    }
    cdouble eta{};
    if (j.contains("eta")) {
      const auto& e = j.at("eta");
      if (e.is_number()) eta = e.get<double>();
      else eta = cdouble(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
    }
    return PotentialModel(std::move(pieces), std::move(tail), eta);
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("model file: ") + ex.what());
  }
}

inline nlohmann::json model_to_json(const PotentialModel& m) {
  nlohmann::json j;
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : m.pieces()) {
    auto pj = detail::dump_expression(p.expr);
    pj["x_lo"] = p.x_lo;
    pj["x_hi"] = p.x_hi;
    j["pieces"].push_back(pj);
  }
  if (m.has_periodic_tail()) {
    const auto& t = m.periodic();
    j["tail"] = {{"kind", "periodic"}, {"period", t.period}, {"X", t.start}, {"expr", detail::dump_expression(t.expr)}};
  } else {
    j["tail"] = {{"kind", "zero"}};
  }
  j["eta"] = {m.eta().real(), m.eta().imag()};
  return j;
}

inline PotentialModel parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("model file: ") + ex.what());
  }
  return model_from_json(j);
}

inline PotentialModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace specbar
