#include "fcs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fcs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw std::invalid_argument("config: " + path + ": " + reason);
}

void expect_keys(const json& obj, const std::string& path, const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + key, "expected a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(path + key, "expected an integer");
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(path + key, "expected a string");
  return obj[key].get<std::string>();
}

// scalar-or-array; every element must satisfy the json type predicate
template <typename T, typename Pred>
std::vector<T> get_list(const json& obj, const std::string& key, Pred ok,
                        const std::vector<T>& fallback, const char* type_name) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) fail(key, "list must be nonempty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!ok(v[i])) fail(key + "[" + std::to_string(i) + "]", std::string("expected ") + type_name);
      out.push_back(v[i].template get<T>());
    }
  } else if (ok(v)) {
    out.push_back(v.get<T>());
  } else {
    fail(key, std::string("expected ") + type_name + " or list thereof");
  }
  return out;
}

}  // namespace

Engine engine_from_string(const std::string& name) {
  if (name == "oracle") return Engine::kOracle;
  if (name == "quasifree") return Engine::kQuasifree;
  if (name == "both") return Engine::kBoth;
  throw std::invalid_argument("config: engine: unknown engine '" + name +
                              "' (expected oracle | quasifree | both)");
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::kOracle: return "oracle";
    case Engine::kQuasifree: return "quasifree";
    case Engine::kBoth: return "both";
  }
  return "?";
}

std::vector<double> AlphaGridSpec::points() const {
  if (count < 2) throw std::invalid_argument("config: alpha_grid.count: must be >= 2");
  if (!(max > min)) throw std::invalid_argument("config: alpha_grid: max must exceed min");
  std::vector<double> pts(count);
  for (int i = 0; i < count; ++i) pts[i] = min + (max - min) * i / (count - 1);
  return pts;
}

void ExperimentConfig::check() const {
  protocol.check();
  if (L.empty() || T.empty()) throw std::invalid_argument("config: L and T must be nonempty");
  for (int l : L)
    if (l < 1) throw std::invalid_argument("config: L: must be >= 1");
  for (double t : T)
    if (!(t > 0.0)) throw std::invalid_argument("config: T: must be > 0");
  if (steps < 0) throw std::invalid_argument("config: steps: must be >= 0");
  if (erasure_error < 0.0 || erasure_error >= 1.0)
    throw std::invalid_argument("config: erasure_error: must lie in [0, 1)");
  alpha_grid.points();  // validates

  const auto report = validate_protocol(protocol);
  if (!report.passed())
    throw std::invalid_argument("config: protocol rejected:\n" + report.summary());
}

std::string ExperimentConfig::canonical_text() const {
  json j;
  j["beta"] = protocol.beta;
  j["kappa"] = protocol.kappa;
  j["lambda_max"] = protocol.lambda_max;
  j["target_probs"] = protocol.target_probs;
  j["schedule_kind"] = to_string(protocol.schedule_kind);
  j["engine"] = to_string(engine);
  j["L"] = L;
  j["T"] = T;
  j["steps"] = steps;
  j["alpha_grid"] = {{"min", alpha_grid.min},
                     {"max", alpha_grid.max},
                     {"count", alpha_grid.count},
                     {"axis", alpha_grid.imaginary ? "imaginary" : "real"}};
  j["erasure_error"] = erasure_error;
  if (wrong_order) j["wrong_order"] = {{"L", wrong_order->L}, {"T", wrong_order->T}};
  return j.dump();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  expect_keys(j, "", {"beta", "kappa", "lambda_max", "target_probs", "schedule_kind", "engine",
                      "L", "T", "steps", "alpha_grid", "erasure_error", "wrong_order"});

  ExperimentConfig cfg;
  cfg.protocol.beta = get_number(j, "", "beta", cfg.protocol.beta);
  cfg.protocol.kappa = get_number(j, "", "kappa", cfg.protocol.kappa);
  cfg.protocol.lambda_max = get_number(j, "", "lambda_max", cfg.protocol.lambda_max);
  if (j.contains("target_probs")) {
    cfg.protocol.target_probs =
        get_list<double>(j, "target_probs", [](const json& v) { return v.is_number(); },
                         cfg.protocol.target_probs, "a number");
  }
  cfg.protocol.schedule_kind =
      schedule_kind_from_string(get_string(j, "", "schedule_kind", "default"));
  cfg.engine = engine_from_string(get_string(j, "", "engine", to_string(cfg.engine)));
  cfg.L = get_list<int>(j, "L", [](const json& v) { return v.is_number_integer(); }, cfg.L,
                        "an integer");
  cfg.T = get_list<double>(j, "T", [](const json& v) { return v.is_number(); }, cfg.T,
                           "a number");
  cfg.steps = get_int(j, "", "steps", cfg.steps);
  cfg.erasure_error = get_number(j, "", "erasure_error", cfg.erasure_error);

  if (j.contains("alpha_grid")) {
    const json& g = j["alpha_grid"];
    if (!g.is_object()) throw std::invalid_argument("config: alpha_grid: expected an object");
    expect_keys(g, "alpha_grid", {"min", "max", "count", "axis"});
    cfg.alpha_grid.min = get_number(g, "alpha_grid.", "min", cfg.alpha_grid.min);
    cfg.alpha_grid.max = get_number(g, "alpha_grid.", "max", cfg.alpha_grid.max);
    cfg.alpha_grid.count = get_int(g, "alpha_grid.", "count", cfg.alpha_grid.count);
    const std::string axis = get_string(g, "alpha_grid.", "axis", "real");
    if (axis != "real" && axis != "imaginary")
      fail("alpha_grid.axis", "expected 'real' or 'imaginary'");
    cfg.alpha_grid.imaginary = axis == "imaginary";
  }
  if (j.contains("wrong_order")) {
    const json& w = j["wrong_order"];
    if (!w.is_object()) throw std::invalid_argument("config: wrong_order: expected an object");
    expect_keys(w, "wrong_order", {"L", "T"});
    WrongOrderSpec spec;
    spec.L = get_int(w, "wrong_order.", "L", spec.L);
    spec.T = get_number(w, "wrong_order.", "T", spec.T);
    cfg.wrong_order = spec;
  }

  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    // keep key-path style messages uniform
    const std::string msg = e.what();
    throw std::invalid_argument(msg.rfind("config:", 0) == 0 ? msg : "config: " + msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fcs
