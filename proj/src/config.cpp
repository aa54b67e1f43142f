#include "fracinv/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fracinv/error.hpp"

namespace fracinv {
namespace {

using nlohmann::json;

std::string type_name(const json& v) { return v.type_name(); }

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) throw ConfigError("unknown field '" + prefix + key + "'");
  }
}

double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("field '" + name + "' must be a number, got " + type_name(v));
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("field '" + name + "' must be an integer, got " + type_name(v));
  return v.get<std::int64_t>();
}

const json& required(const json& doc, const std::string& name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw ConfigError("missing field '" + name + "'");
  return *it;
}

ScalarFunction function(const json& v, const std::string& name, const char* variable,
                        const std::filesystem::path& base_dir) {
  if (v.is_string()) {
    try {
      return parse_expr(v.get<std::string>(), variable);
    } catch (const ParseError& e) {
      throw ConfigError("field '" + name + "': " + e.what());
    }
  }
  if (v.is_number()) {
    std::ostringstream text;
    text.precision(17);
    text << v.get<double>();
    return parse_expr(text.str(), variable);
  }
  if (v.is_object()) {
    reject_unknown(v, {"table", "rows"}, name + ".");
    const json& file = required(v, "table");
    if (!file.is_string()) throw ConfigError("field '" + name + ".table' must be a file name");
    std::filesystem::path path(file.get<std::string>());
    if (path.is_relative()) path = std::filesystem::absolute(base_dir / path).lexically_normal();
    try {
      return TabulatedFunction::from_csv(path);
    } catch (const Error& e) {
      throw ConfigError("field '" + name + "': " + e.what());
    }
  }
  throw ConfigError("field '" + name + "' must be an expression string, a number or {\"table\": file}, got " +
                    type_name(v));
}

json function_json(const ScalarFunction& f) {
  if (f.empty()) return nullptr;
  if (const TabulatedFunction* t = f.table()) {
    json out = {{"table", t->source()}, {"rows", t->abscissae().size()}};
    return out;
  }
  return f.describe();
}

}  // namespace

ProblemSpec parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"alpha", "l", "T", "p", "q", "phi", "h", "f", "g", "g_derivative", "g_second_derivative", "grid",
                  "noise", "inverse", "hypotheses"},
                 "");

  ProblemSpec spec;
  spec.alpha = number(required(doc, "alpha"), "alpha");
  spec.l = number(required(doc, "l"), "l");
  spec.T = number(required(doc, "T"), "T");
  for (auto [name, slot] : {std::pair{"p", &spec.p}, {"q", &spec.q}, {"phi", &spec.phi}, {"h", &spec.h}}) {
    *slot = function(required(doc, name), name, "x", base_dir);
  }
  for (auto [name, slot] : {std::pair{"f", &spec.f},
                            {"g", &spec.g},
                            {"g_derivative", &spec.g_derivative},
                            {"g_second_derivative", &spec.g_second_derivative}}) {
    if (doc.contains(name) && !doc[name].is_null()) *slot = function(doc[name], name, "t", base_dir);
  }

  if (const auto it = doc.find("grid"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("field 'grid' must be an object");
    reject_unknown(*it, {"M", "K", "N"}, "grid.");
    if (it->contains("M")) spec.grid.M = integer((*it)["M"], "grid.M");
    if (it->contains("K")) spec.grid.K = integer((*it)["K"], "grid.K");
    if (it->contains("N") && !(*it)["N"].is_null() && (*it)["N"] != "auto") spec.grid.N = integer((*it)["N"], "grid.N");
  }
  if (const auto it = doc.find("noise"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("field 'noise' must be an object");
    reject_unknown(*it, {"eps", "seed", "generator"}, "noise.");
    if (it->contains("generator") && (*it)["generator"] != "mt19937_64") {
      throw ConfigError("field 'noise.generator': only \"mt19937_64\" is available");
    }
    if (it->contains("eps")) spec.noise.eps = number((*it)["eps"], "noise.eps");
    if (it->contains("seed")) {
      const json& seed = (*it)["seed"];
      if (!seed.is_number_unsigned()) throw ConfigError("field 'noise.seed' must be a nonnegative integer");
      spec.noise.seed = seed.get<std::uint64_t>();
    }
  }
  if (const auto it = doc.find("inverse"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("field 'inverse' must be an object");
    reject_unknown(*it, {"caputo", "prefilter_window", "compat_tol", "picard_max_iter", "picard_tol"}, "inverse.");
    InverseParams& inv = spec.inverse;
    if (it->contains("caputo")) {
      if (!(*it)["caputo"].is_string()) throw ConfigError("field 'inverse.caputo' must be a string");
      inv.caputo = caputo_method_from_string((*it)["caputo"].get<std::string>());
    }
    if (it->contains("prefilter_window")) {
      inv.prefilter_window = integer((*it)["prefilter_window"], "inverse.prefilter_window");
    }
    if (it->contains("compat_tol")) inv.compat_tol = number((*it)["compat_tol"], "inverse.compat_tol");
    if (it->contains("picard_max_iter")) {
      const std::int64_t n = integer((*it)["picard_max_iter"], "inverse.picard_max_iter");
      if (n < 1 || n > std::numeric_limits<int>::max()) throw ConfigError("inverse.picard_max_iter must be positive");
      inv.picard_max_iter = static_cast<int>(n);
    }
    if (it->contains("picard_tol")) inv.picard_tol = number((*it)["picard_tol"], "inverse.picard_tol");
  }
  if (const auto it = doc.find("hypotheses"); it != doc.end()) {
    const std::string policy = it->is_string() ? it->get<std::string>() : "";
    if (policy == "error") {
      spec.hypotheses = HypothesisPolicy::kError;
    } else if (policy == "warn") {
      spec.hypotheses = HypothesisPolicy::kWarn;
    } else {
      throw ConfigError("field 'hypotheses' must be \"error\" or \"warn\"");
    }
  }

  validate_structure(spec, Mode::kAny);
  return spec;
}

ProblemSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json spec_to_json(const ProblemSpec& spec) {
  json out;
  out["alpha"] = spec.alpha;
  out["l"] = spec.l;
  out["T"] = spec.T;
  out["p"] = function_json(spec.p);
  out["q"] = function_json(spec.q);
  out["phi"] = function_json(spec.phi);
  out["h"] = function_json(spec.h);
  out["f"] = function_json(spec.f);
  out["g"] = function_json(spec.g);
  out["g_derivative"] = function_json(spec.g_derivative);
  out["g_second_derivative"] = function_json(spec.g_second_derivative);
  out["grid"] = {{"M", spec.grid.M}, {"K", spec.grid.K}, {"N", spec.grid.N ? json(*spec.grid.N) : json("auto")}};
  out["noise"] = {{"eps", spec.noise.eps}, {"seed", spec.noise.seed}, {"generator", "mt19937_64"}};
  out["inverse"] = {{"caputo", std::string(to_string(spec.inverse.caputo))},
                    {"prefilter_window", spec.inverse.prefilter_window},
                    {"compat_tol", spec.inverse.compat_tol},
                    {"picard_max_iter", spec.inverse.picard_max_iter},
                    {"picard_tol", spec.inverse.picard_tol}};
  out["hypotheses"] = spec.hypotheses == HypothesisPolicy::kWarn ? "warn" : "error";
  return out;
}

}  // namespace fracinv
