#include "hcm/cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "hcm/errors.hpp"

namespace hcm::cli {
namespace {

using Keys = std::set<std::string>;

void check_keys(const YAML::Node& node, const Keys& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": invalid value");
  }
}

void require_one_of(const std::string& value, const Keys& options, const std::string& where) {
  if (!options.contains(value)) throw ConfigError(where + ": unknown value '" + value + "'");
}

Engine parse_engine(const std::string& s, const std::string& where) {
  static const std::vector<std::pair<std::string, Engine>> table = {
      {"corrector", Engine::Corrector},           {"hur", Engine::Hur},
      {"asymptotics", Engine::Asymptotics},       {"superstability", Engine::Superstability},
      {"uniqueness", Engine::Uniqueness},         {"homogeneity", Engine::Homogeneity},
      {"cross_validate", Engine::CrossValidate}};
  for (const auto& [name, e] : table) {
    if (name == s) return e;
  }
  throw ConfigError(where + ": unknown engine '" + s + "'");
}

ControlConfig parse_control(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"kind", "coeff", "p", "q"}, where);
  ControlConfig c;
  read(n, "kind", c.kind, where);
  read(n, "coeff", c.coeff, where);
  read(n, "p", c.p, where);
  c.q = c.p;
  read(n, "q", c.q, where);
  require_one_of(c.kind, {"power_product", "power_sum"}, where + ".kind");
  return c;
}

DomainConfig parse_domain(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"kind", "c", "radius"}, where);
  DomainConfig d;
  read(n, "kind", d.kind, where);
  read(n, "c", d.c, where);
  read(n, "radius", d.radius, where);
  require_one_of(d.kind, {"full", "ball_product", "exterior_product", "exterior_union", "ball_union"},
                 where + ".kind");
  return d;
}

FixtureConfig parse_fixture(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"kind", "profile", "coeff", "p", "q", "amplitude", "cell", "c", "decay", "d", "k_in",
                 "k_out"},
             where);
  FixtureConfig f;
  read(n, "kind", f.kind, where);
  read(n, "profile", f.profile, where);
  read(n, "coeff", f.coeff, where);
  read(n, "p", f.p, where);
  f.q = f.p;
  read(n, "q", f.q, where);
  read(n, "amplitude", f.amplitude, where);
  read(n, "cell", f.cell, where);
  read(n, "c", f.c, where);
  read(n, "decay", f.decay, where);
  read(n, "d", f.d, where);
  read(n, "k_in", f.k_in, where);
  f.k_out = f.k_in + 1;
  read(n, "k_out", f.k_out, where);
  require_one_of(f.kind,
                 {"exact_isometry", "tail_shift", "perturbed_isometry", "homogeneous", "asymptotic_decay"},
                 where + ".kind");
  require_one_of(f.profile, {"power_phase", "sum_phase", "bounded", "discontinuous"}, where + ".profile");
  require_one_of(f.decay, {"inverse_sqrt", "inverse_log", "sqrt_ratio"}, where + ".decay");
  if (f.d <= 0 || f.k_in <= 0 || f.k_out <= 0) throw ConfigError(where + ": dimensions must be positive");
  if ((f.kind == "tail_shift" || f.kind == "asymptotic_decay") && f.k_out != f.k_in + 1) {
    throw ConfigError(where + ": " + f.kind + " needs k_out = k_in + 1");
  }
  if (f.k_out < f.k_in) throw ConfigError(where + ": k_out must be at least k_in");
  return f;
}

AsymptoticsConfig parse_asymptotics(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"p", "mode", "epsilons", "thresholds"}, where);
  AsymptoticsConfig a;
  read(n, "p", a.p, where);
  read(n, "mode", a.mode, where);
  read(n, "epsilons", a.epsilons, where);
  read(n, "thresholds", a.thresholds, where);
  require_one_of(a.mode, {"max_norm", "min_norm"}, where + ".mode");
  require_one_of(a.thresholds, {"estimated", "analytic"}, where + ".thresholds");
  return a;
}

ScenarioConfig parse_scenario(const YAML::Node& n, std::size_t index) {
  std::string where = "scenarios[" + std::to_string(index) + "]";
  check_keys(n,
             {"name", "engine", "seed", "probes", "probe_range", "fixture", "control", "domain",
              "hur_control", "c_alt", "asymptotics", "tolerances"},
             where);
  ScenarioConfig s;
  read(n, "name", s.name, where);
  if (s.name.empty()) throw ConfigError(where + ": scenario needs a name");
  where = "scenario '" + s.name + "'";
  std::string engine;
  read(n, "engine", engine, where);
  s.engine = parse_engine(engine, where + ".engine");
  read(n, "seed", s.seed, where);
  read(n, "probes", s.probes, where);
  if (s.probes <= 0) throw ConfigError(where + ": probes must be positive");
  if (const YAML::Node r = n["probe_range"]) {
    std::vector<double> range;
    read(n, "probe_range", range, where);
    if (range.size() != 2 || !(range[0] > 0.0) || !(range[1] >= range[0])) {
      throw ConfigError(where + ".probe_range: expected [lo, hi] with 0 < lo <= hi");
    }
    s.probe_lo = range[0];
    s.probe_hi = range[1];
  }
  if (!n["fixture"]) throw ConfigError(where + ": missing fixture");
  s.fixture = parse_fixture(n["fixture"], where + ".fixture");
  if (n["control"]) s.control = parse_control(n["control"], where + ".control");
  if (n["domain"]) s.domain = parse_domain(n["domain"], where + ".domain");
  if (n["hur_control"]) s.hur_control = parse_control(n["hur_control"], where + ".hur_control");
  read(n, "c_alt", s.c_alt, where);
  if (n["asymptotics"]) s.asymptotics = parse_asymptotics(n["asymptotics"], where + ".asymptotics");
  if (const YAML::Node t = n["tolerances"]) {
    check_keys(t, {"tol", "iso", "homogeneity", "max_iter"}, where + ".tolerances");
    read(t, "tol", s.tol, where + ".tolerances");
    read(t, "iso", s.iso, where + ".tolerances");
    read(t, "homogeneity", s.homogeneity_tol, where + ".tolerances");
    read(t, "max_iter", s.max_iter, where + ".tolerances");
  }

  const bool needs_hur = s.engine == Engine::Hur || s.engine == Engine::CrossValidate;
  if (needs_hur && !s.hur_control) throw ConfigError(where + ": engine needs hur_control");
  if (s.engine == Engine::Asymptotics && s.fixture.kind != "asymptotic_decay" &&
      s.asymptotics.thresholds == "analytic") {
    throw ConfigError(where + ": analytic thresholds need an asymptotic_decay fixture");
  }
  // Specs validate before any computation.
  try {
    if (s.control) s.control->build();
    if (s.hur_control) s.hur_control->build();
    if (s.domain) s.domain->build();
    if (s.engine == Engine::Uniqueness && s.domain) s.domain->build().with_scale(s.c_alt);
  } catch (const hcm::Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (s.fixture.kind == "perturbed_isometry" && !s.control) {
    throw ConfigError(where + ": perturbed_isometry needs a control");
  }
  return s;
}

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Corrector: return "corrector";
    case Engine::Hur: return "hur";
    case Engine::Asymptotics: return "asymptotics";
    case Engine::Superstability: return "superstability";
    case Engine::Uniqueness: return "uniqueness";
    case Engine::Homogeneity: return "homogeneity";
    case Engine::CrossValidate: return "cross_validate";
  }
  return "unknown";
}

ControlSpec ControlConfig::build() const {
  if (kind == "power_sum") return ControlSpec::power_sum(coeff, p);
  return ControlSpec::power_product(coeff, p, q);
}

DomainSpec DomainConfig::build() const {
  if (kind == "full") return DomainSpec::full(c);
  if (kind == "ball_product") return DomainSpec::ball_product(radius, c);
  if (kind == "exterior_product") return DomainSpec::exterior_product(radius, c);
  if (kind == "exterior_union") return DomainSpec::exterior_union(radius, c);
  return DomainSpec::ball_union(radius, c);
}

FixtureSpec ScenarioConfig::fixture_spec() const {
  const FixtureConfig& f = fixture;
  FixtureSpec spec;
  spec.d = f.d;
  spec.k_in = f.k_in;
  spec.k_out = f.k_out;
  if (f.kind == "exact_isometry") {
    spec.kind = fixture::ExactIsometry{};
  } else if (f.kind == "homogeneous") {
    spec.kind = fixture::Homogeneous{f.c};
  } else if (f.kind == "perturbed_isometry") {
    std::optional<DomainSpec> dom;
    if (domain) dom = domain->build();
    spec.kind = fixture::PerturbedIsometry{control->build(), f.amplitude, dom};
  } else if (f.kind == "asymptotic_decay") {
    DecayProfile decay = DecayProfile::InverseSqrt;
    if (f.decay == "inverse_log") decay = DecayProfile::InverseLog;
    if (f.decay == "sqrt_ratio") decay = DecayProfile::SqrtRatio;
    spec.kind = fixture::AsymptoticDecay{f.p, decay};
  } else {
    GProfile g;
    if (f.profile == "power_phase") g = GProfile::power_phase(f.coeff, f.p, f.q);
    if (f.profile == "sum_phase") g = GProfile::sum_phase(f.coeff, f.p);
    if (f.profile == "bounded") g = GProfile::bounded(f.coeff);
    if (f.profile == "discontinuous") g = GProfile::discontinuous(f.coeff, f.p, f.q, f.cell);
    g.amplitude = f.amplitude;
    spec.kind = fixture::TailShift{g};
  }
  return spec;
}

nlohmann::json ScenarioConfig::to_json() const {
  using nlohmann::json;
  auto control_json = [](const ControlConfig& c) {
    return json{{"kind", c.kind}, {"coeff", c.coeff}, {"p", c.p}, {"q", c.q}};
  };
  json j;
  j["name"] = name;
  j["engine"] = to_string(engine);
  j["seed"] = seed;
  j["probes"] = probes;
  j["probe_range"] = {probe_lo, probe_hi};
  const FixtureConfig& f = fixture;
  j["fixture"] = {{"kind", f.kind}, {"profile", f.profile}, {"coeff", f.coeff}, {"p", f.p},
                  {"q", f.q}, {"amplitude", f.amplitude}, {"cell", f.cell}, {"c", f.c},
                  {"decay", f.decay}, {"d", f.d}, {"k_in", f.k_in}, {"k_out", f.k_out}};
  if (control) j["control"] = control_json(*control);
  if (domain) j["domain"] = {{"kind", domain->kind}, {"c", domain->c}, {"radius", domain->radius}};
  if (hur_control) j["hur_control"] = control_json(*hur_control);
  j["c_alt"] = c_alt;
  j["asymptotics"] = {{"p", asymptotics.p}, {"mode", asymptotics.mode},
                      {"epsilons", asymptotics.epsilons}, {"thresholds", asymptotics.thresholds}};
  j["tolerances"] = {{"tol", tol}, {"iso", iso}, {"homogeneity", homogeneity_tol}, {"max_iter", max_iter}};
  return j;
}

std::string ScenarioConfig::digest() const {
  const std::string text = to_json().dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  return hex(md, len);
}

SuiteConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  SuiteConfig suite;
  if (!root || root.IsNull()) return suite;
  check_keys(root, {"scenarios"}, "config");
  const YAML::Node list = root["scenarios"];
  if (!list || list.IsNull()) return suite;
  if (!list.IsSequence()) throw ConfigError("config.scenarios: expected a list");
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    ScenarioConfig s = parse_scenario(list[i], i);
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
    suite.scenarios.push_back(std::move(s));
  }
  std::sort(suite.scenarios.begin(), suite.scenarios.end(),
            [](const ScenarioConfig& a, const ScenarioConfig& b) { return a.name < b.name; });
  return suite;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace hcm::cli
