#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "memkernel/error.hpp"

namespace memkernel::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, path + ": " + msg);
}

/// Field access with the key path carried along for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void require_object() const {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }
  void allow_only(std::initializer_list<std::string> keys) const {
    const std::set<std::string> ok(keys);
    for (const auto& [k, v] : j_.items())
      if (!ok.count(k)) fail(child(k), "unknown key");
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.contains(key)) fail(child(key), "missing required key");
    return {j_.at(key), child(key)};
  }
  double number(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_number()) fail(n.path_, "expected a number");
    return n.j_.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  long long integer(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_number_integer()) fail(n.path_, "expected an integer");
    return n.j_.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::string string(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_string()) fail(n.path_, "expected a string");
    return n.j_.get<std::string>();
  }
  Eigen::Vector3d vec3(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_array() || n.j_.size() != 3) fail(n.path_, "expected an array of three numbers");
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
      if (!n.j_[i].is_number()) fail(n.path_ + "[" + std::to_string(i) + "]", "expected a number");
      v(i) = n.j_[i].get<double>();
    }
    return v;
  }

 private:
  const json& j_;
  std::string path_;
};

ScalarProfile::Mode parse_mode(const Node& n) {
  n.require_object();
  n.allow_only({"amplitude", "m1", "m2", "phase"});
  return {n.number("amplitude"), n.number("m1", 0.0), n.number("m2", 0.0), n.number("phase", 0.0)};
}

std::vector<ScalarProfile::Mode> parse_modes(const Node& n) {
  if (!n.raw().is_array()) fail(n.path(), "expected an array of modes");
  std::vector<ScalarProfile::Mode> modes;
  for (size_t i = 0; i < n.raw().size(); ++i)
    modes.push_back(parse_mode(Node(n.raw()[i], n.path() + "[" + std::to_string(i) + "]")));
  return modes;
}

SurfaceDef parse_surface(const Node& n, bool& sampled) {
  n.require_object();
  const std::string tag = n.string("kind");
  sampled = false;
  if (n.has("sampled")) {
    if (!n.raw().at("sampled").is_boolean()) fail(n.child("sampled"), "expected a boolean");
    sampled = n.raw().at("sampled").get<bool>();
  }
  SurfaceDef d;
  if (tag == "sphere" || tag == "sphere_quadrature") {
    n.allow_only({"kind", "sampled", "R"});
    d = tag == "sphere" ? SurfaceDef::sphere(n.number("R", 1.0)) : SurfaceDef::sphere_quadrature(n.number("R", 1.0));
  } else if (tag == "cylinder") {
    n.allow_only({"kind", "sampled", "r", "L"});
    d = SurfaceDef::cylinder(n.number("r", 1.0), n.number("L", 2 * std::numbers::pi));
  } else if (tag == "torus") {
    n.allow_only({"kind", "sampled", "a", "c"});
    d = SurfaceDef::torus(n.number("a", 1.0), n.number("c", 3.0));
  } else if (tag == "perturbed_torus") {
    n.allow_only({"kind", "sampled", "a", "c", "epsilon", "m", "k"});
    d = SurfaceDef::perturbed_torus(n.number("a", 1.0), n.number("c", 3.0), n.number("epsilon", 0.1),
                                    static_cast<int>(n.integer("m", 2)), static_cast<int>(n.integer("k", 1)));
  } else if (tag == "monge") {
    n.allow_only({"kind", "sampled", "height"});
    d = SurfaceDef::monge(n.has("height") ? parse_modes(n.at("height")) : std::vector<ScalarProfile::Mode>{});
  } else {
    fail(n.child("kind"), "unknown surface tag '" + tag + "'");
  }
  try {
    validate(d);
  } catch (const Error& e) {
    fail(n.path(), e.what());
  }
  return d;
}

void parse_term(const Node& n, std::vector<EnergyTerm>& out) {
  n.require_object();
  const std::string tag = n.string("term");
  auto modulus = [&](const char* key) {
    n.allow_only({"term", key});
    return parse_profile(n.at(key).raw(), n.child(key));
  };
  if (tag == "soap") {
    out.push_back(EnergyTerm::soap(modulus("sigma")));
  } else if (tag == "bending") {
    out.push_back(EnergyTerm::bending(modulus("kappa")));
  } else if (tag == "mean") {
    out.push_back(EnergyTerm::mean(modulus("beta")));
  } else if (tag == "gaussian") {
    out.push_back(EnergyTerm::gaussian(modulus("kappa_bar")));
  } else if (tag == "volume") {
    n.allow_only({"term", "P"});
    out.push_back(EnergyTerm::volume(n.number("P")));
  } else if (tag == "phase_field") {
    n.allow_only({"term", "lambda", "beta_phi", "potential", "phi"});
    std::vector<double> pot;
    if (n.has("potential")) {
      const Node p = n.at("potential");
      if (!p.raw().is_array()) fail(p.path(), "expected an array of polynomial coefficients");
      for (size_t i = 0; i < p.raw().size(); ++i) {
        if (!p.raw()[i].is_number()) fail(p.path() + "[" + std::to_string(i) + "]", "expected a number");
        pot.push_back(p.raw()[i].get<double>());
      }
    }
    out.push_back(EnergyTerm::phase_field(n.number("lambda"), n.number("beta_phi", 0.0), pot,
                                          parse_profile(n.at("phi").raw(), n.child("phi"))));
  } else if (tag == "magnetic") {
    n.allow_only({"term", "alpha", "B0", "M"});
    AffineField B;
    B.B0 = n.vec3("B0");
    if (n.has("M")) {
      const Node m = n.at("M");
      if (!m.raw().is_array() || m.raw().size() != 3) fail(m.path(), "expected a 3x3 array");
      for (int r = 0; r < 3; ++r) {
        const json& row = m.raw()[r];
        const std::string rp = m.path() + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != 3) fail(rp, "expected an array of three numbers");
        for (int c = 0; c < 3; ++c) {
          if (!row[c].is_number()) fail(rp + "[" + std::to_string(c) + "]", "expected a number");
          B.M(r, c) = row[c].get<double>();
        }
      }
    }
    out.push_back(EnergyTerm::magnetic(n.number("alpha"), B));
  } else if (tag == "spontaneous") {
    n.allow_only({"term", "kappa", "K0"});
    for (auto& t : expand_spontaneous_curvature(n.number("kappa"), n.number("K0"))) out.push_back(t);
  } else if (tag == "canham_helfrich") {
    n.allow_only({"term", "kappa", "kappa_bar", "beta", "sigma"});
    for (auto& t : EnergyModel::canham_helfrich(n.number("kappa"), n.number("kappa_bar", 0.0),
                                                n.number("beta", 0.0), n.number("sigma", 0.0))
                       .terms)
      out.push_back(t);
  } else {
    fail(n.child("term"), "unknown energy term tag '" + tag + "'");
  }
}

VariationDef parse_variation(const Node& n) {
  n.require_object();
  const std::string tag = n.string("kind");
  if (tag == "translation") {
    n.allow_only({"kind", "vector"});
    return VariationDef::translation(n.vec3("vector"));
  }
  if (tag == "rotation") {
    n.allow_only({"kind", "axis"});
    return VariationDef::rotation(n.vec3("axis"));
  }
  if (tag == "normal") {
    n.allow_only({"kind", "phi"});
    return VariationDef::normal(n.has("phi") ? parse_profile(n.at("phi").raw(), n.child("phi"))
                                             : ScalarProfile::constant(1.0));
  }
  if (tag == "random_smooth") {
    n.allow_only({"kind", "seed", "band", "amplitude"});
    const long long seed = n.integer("seed", 1);
    if (seed < 0) fail(n.child("seed"), "must be non-negative");
    const long long band = n.integer("band", 3);
    if (band < 1 || band > 4) fail(n.child("band"), "must be between 1 and 4");
    return VariationDef::random_smooth(static_cast<std::uint64_t>(seed), static_cast<int>(band),
                                       n.number("amplitude", 0.05));
  }
  fail(n.child("kind"), "unknown variation tag '" + tag + "'");
}

}  // namespace

ScalarProfile parse_profile(const json& j, const std::string& path) {
  if (j.is_number()) return ScalarProfile::constant(j.get<double>());
  const Node n(j, path);
  if (!j.is_object()) fail(path, "expected a number or a profile object {base, modes}");
  n.allow_only({"base", "modes"});
  ScalarProfile p = ScalarProfile::constant(n.number("base", 0.0));
  if (n.has("modes")) p.modes = parse_modes(n.at("modes"));
  return p;
}

double RunConfig::bound(const std::string& key, double fallback) const {
  if (!tolerance.contains(key)) return fallback;
  return tolerance.at(key).get<double>();
}

RunConfig parse_config(const json& doc, const std::string& command) {
  const Node root(doc, "");
  root.require_object();
  root.allow_only({"surface", "grid", "model", "variation", "levels", "seed", "tolerance"});
  RunConfig cfg;
  cfg.echo = doc;
  cfg.surface = parse_surface(root.at("surface"), cfg.sampled);

  if (root.has("grid")) {
    const Node g = root.at("grid");
    g.require_object();
    g.allow_only({"n1", "n2"});
    cfg.n1 = static_cast<int>(g.integer("n1"));
    cfg.n2 = static_cast<int>(g.integer("n2", cfg.n1));
    if (cfg.n1 < 8 || cfg.n2 < 8) fail("grid", "n1 and n2 must be at least 8");
  }
  if (root.has("levels")) {
    const Node l = root.at("levels");
    if (!l.raw().is_array() || l.raw().empty()) fail(l.path(), "expected a non-empty array of grid sizes");
    for (size_t i = 0; i < l.raw().size(); ++i) {
      const auto& v = l.raw()[i];
      if (!v.is_number_integer() || v.get<int>() < 8)
        fail(l.path() + "[" + std::to_string(i) + "]", "expected an integer grid size >= 8");
      if (i > 0 && v.get<int>() <= cfg.levels.back())
        fail(l.path() + "[" + std::to_string(i) + "]", "grid sizes must increase");
      cfg.levels.push_back(v.get<int>());
    }
  }
  if (root.has("seed")) {
    const long long s = root.integer("seed");
    if (s < 0) fail("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (root.has("tolerance")) {
    const Node t = root.at("tolerance");
    t.require_object();
    for (const auto& [k, v] : t.raw().items())
      if (!v.is_number() || !(v.get<double>() > 0)) fail(t.child(k), "expected a positive number");
    cfg.tolerance = t.raw();
  }

  const bool wants_model = command != "check-identities";
  if (root.has("model")) {
    const Node m = root.at("model");
    if (!m.raw().is_array() || m.raw().empty()) fail(m.path(), "expected a non-empty array of terms");
    for (size_t i = 0; i < m.raw().size(); ++i)
      parse_term(Node(m.raw()[i], "model[" + std::to_string(i) + "]"), cfg.model.terms);
    if (cfg.model.terms.empty()) fail("model", "all terms vanish");
  } else if (wants_model) {
    fail("model", "missing required key");
  }

  if (root.has("variation")) cfg.variation = parse_variation(root.at("variation"));
  else if (command == "variation") fail("variation", "missing required key");
  if (cfg.variation && cfg.variation->kind == VariationKind::RandomSmooth && !root.has("seed"))
    cfg.seed = cfg.variation->seed;
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": invalid JSON: " + e.what());
  }
  return parse_config(doc, command);
}

json registry() {
  return {
      {"surfaces",
       {{"sphere", {"R"}},
        {"sphere_quadrature", {"R"}},
        {"cylinder", {"r", "L"}},
        {"torus", {"a", "c"}},
        {"perturbed_torus", {"a", "c", "epsilon", "m", "k"}},
        {"monge", {"height"}}}},
      {"terms",
       {{"soap", {"sigma"}},
        {"bending", {"kappa"}},
        {"mean", {"beta"}},
        {"gaussian", {"kappa_bar"}},
        {"volume", {"P"}},
        {"phase_field", {"lambda", "beta_phi", "potential", "phi"}},
        {"magnetic", {"alpha", "B0", "M"}},
        {"spontaneous", {"kappa", "K0"}},
        {"canham_helfrich", {"kappa", "kappa_bar", "beta", "sigma"}}}},
      {"variations",
       {{"translation", {"vector"}},
        {"rotation", {"axis"}},
        {"normal", {"phi"}},
        {"random_smooth", {"seed", "band", "amplitude"}}}},
      {"commands", {"check-identities", "shape-residual", "stress", "variation", "catalog"}}};
}

}  // namespace memkernel::cli
