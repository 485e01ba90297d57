#include "tanglebound/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace tanglebound {

namespace {

using nlohmann::json;

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("complex entries must be [re, im] number pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json state_to_json(const PureState& state) {
  json amps = json::array();
  for (int i = 0; i < 8; ++i) amps.push_back(complex_to_json(state.amplitude(i)));
  return json{{"amplitudes", amps}};
}

PureState state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("amplitudes")) {
    throw std::invalid_argument("state documents need an \"amplitudes\" array");
  }
  const json& amps = j.at("amplitudes");
  if (!amps.is_array() || amps.size() != 8) {
    throw std::invalid_argument("a state has exactly eight amplitudes");
  }
  Amplitudes a;
  for (int i = 0; i < 8; ++i) a(i) = complex_from_json(amps[static_cast<std::size_t>(i)]);
  return PureState(a);
}

json observable_to_json(const Observable& obs) {
  json rows = json::array();
  for (int i = 0; i < 8; ++i) {
    json row = json::array();
    for (int k = 0; k < 8; ++k) row.push_back(complex_to_json(obs.matrix()(i, k)));
    rows.push_back(std::move(row));
  }
  json out{{"matrix", rows}};
  if (!obs.label().empty()) out["label"] = obs.label();
  return out;
}

Observable observable_from_json(const json& j) {
  if (!j.is_object() || !j.contains("matrix")) {
    throw std::invalid_argument("observable documents need a \"matrix\" field");
  }
  const json& rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != 8) {
    throw std::invalid_argument("an observable matrix has exactly eight rows");
  }
  Matrix8 m;
  for (int i = 0; i < 8; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 8) {
      throw std::invalid_argument("an observable matrix has exactly eight columns");
    }
    for (int k = 0; k < 8; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
  }
  return Observable(m, j.value("label", std::string{}));
}

json settings_to_json(const OptimizerSettings& settings) {
  return json{{"restarts", settings.restarts},
              {"r_box", json::array({settings.r_box_lo, settings.r_box_hi})},
              {"inner_tolerance", settings.inner_tolerance},
              {"outer_tolerance", settings.outer_tolerance},
              {"seed", settings.seed},
              {"max_inner_iterations", settings.max_inner_iterations}};
}

OptimizerSettings settings_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("settings must be a JSON object");
  }
  OptimizerSettings s;
  s.restarts = j.value("restarts", s.restarts);
  if (j.contains("r_box")) {
    const json& box = j.at("r_box");
    if (!box.is_array() || box.size() != 2 || !box[0].is_number() ||
        !box[1].is_number()) {
      throw std::invalid_argument("r_box must be a [lo, hi] pair");
    }
    s.r_box_lo = box[0].get<double>();
    s.r_box_hi = box[1].get<double>();
  }
  s.inner_tolerance = j.value("inner_tolerance", s.inner_tolerance);
  s.outer_tolerance = j.value("outer_tolerance", s.outer_tolerance);
  s.seed = j.value("seed", s.seed);
  s.max_inner_iterations = j.value("max_inner_iterations", s.max_inner_iterations);
  s.validate();
  return s;
}

json problem_to_json(const BoundProblem& problem) {
  json witnesses = json::array();
  for (const auto& w : problem.witnesses) witnesses.push_back(observable_to_json(w));
  json space;
  switch (problem.space.kind()) {
    case SearchSpaceKind::Full:
      space = "full";
      break;
    case SearchSpaceKind::Symmetric:
      space = "symmetric";
      break;
    case SearchSpaceKind::Span: {
      const auto& basis = problem.space.basis();
      space = json{{"span", json::array({state_to_json(PureState(basis.col(0))),
                                         state_to_json(PureState(basis.col(1)))})}};
      break;
    }
  }
  return json{{"witnesses", witnesses},
              {"measured", problem.measured},
              {"measure", problem.measure == Measure::Tau3 ? "tau3" : "tau3sq"},
              {"space", space},
              {"settings", settings_to_json(problem.settings)}};
}

BoundProblem problem_from_json(const json& j) {
  if (!j.is_object() || !j.contains("witnesses") || !j.contains("measured")) {
    throw std::invalid_argument(
        "problem documents need \"witnesses\" and \"measured\" fields");
  }
  std::vector<Observable> witnesses;
  for (const json& w : j.at("witnesses")) witnesses.push_back(observable_from_json(w));

  std::vector<double> measured;
  for (const json& v : j.at("measured")) {
    if (!v.is_number()) throw std::invalid_argument("measured values must be numbers");
    measured.push_back(v.get<double>());
  }

  Measure measure = Measure::Tau3;
  const std::string mname = j.value("measure", std::string("tau3"));
  if (mname == "tau3") {
    measure = Measure::Tau3;
  } else if (mname == "tau3sq") {
    measure = Measure::Tau3Sq;
  } else {
    throw std::invalid_argument("measure must be \"tau3\" or \"tau3sq\"");
  }

  SearchSpace space = SearchSpace::full();
  if (j.contains("space")) {
    const json& sp = j.at("space");
    if (sp.is_string()) {
      const std::string name = sp.get<std::string>();
      if (name == "full") {
        space = SearchSpace::full();
      } else if (name == "symmetric") {
        space = SearchSpace::symmetric();
      } else {
        throw std::invalid_argument("space must be \"full\", \"symmetric\" or a span");
      }
    } else if (sp.is_object() && sp.contains("span")) {
      const json& pair = sp.at("span");
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("a span space lists exactly two states");
      }
      space = SearchSpace::span(state_from_json(pair[0]), state_from_json(pair[1]));
    } else {
      throw std::invalid_argument("space must be \"full\", \"symmetric\" or a span");
    }
  }

  OptimizerSettings settings;
  if (j.contains("settings")) settings = settings_from_json(j.at("settings"));

  BoundProblem problem{std::move(witnesses), std::move(measured), measure,
                       std::move(space), settings};
  problem.validate();
  return problem;
}

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIter:
      return "max_iter";
    case SolveStatus::TrivialZero:
      return "trivial_zero";
  }
  return "unknown";
}

json result_to_json(const BoundResult& result, bool include_trace) {
  std::vector<double> r_star(result.r_star.data(),
                             result.r_star.data() + result.r_star.size());
  json out{{"epsilon", result.epsilon},
           {"r_star", r_star},
           {"inner_minimizer", state_to_json(result.inner_minimizer)},
           {"minimizer_symmetric_weight",
            symmetric_subspace_weight(result.inner_minimizer)},
           {"status", status_name(result.status)}};
  if (include_trace) {
    json trace = json::array();
    for (const TracePoint& t : result.trace) {
      std::vector<double> r(t.r.data(), t.r.data() + t.r.size());
      trace.push_back(json{{"r", r}, {"value", t.value}});
    }
    out["trace"] = std::move(trace);
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace tanglebound
