#include "hcm/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "hcm/asymptotics.hpp"
#include "hcm/corrector.hpp"
#include "hcm/errors.hpp"
#include "hcm/fixtures.hpp"
#include "hcm/hur.hpp"
#include "hcm/random.hpp"

namespace hcm::cli {
namespace {

constexpr const char* kAnchorTruth = "fixture round trip: recovered I equals the stored isometry";
constexpr const char* kAnchorAdmissible = "approximate inner-product condition on D";

constexpr std::uint64_t kProbeSalt = 0x70b35eedULL;
constexpr std::uint64_t kPartnerSalt = 0x9a27e1ULL;
constexpr std::uint64_t kAuditSalt = 0xa0d17ULL;

std::vector<ModuleVector> probe_points(const ScenarioConfig& s, std::uint64_t salt) {
  Rng rng(s.seed ^ salt);
  return stratified_probes(rng, s.fixture.d, s.fixture.k_in, s.probes, s.probe_lo, s.probe_hi);
}

CorrectorOptions corrector_options(const ScenarioConfig& s) {
  CorrectorOptions o;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  o.tolerances.iso = s.iso;
  return o;
}

HurOptions hur_options(const ScenarioConfig& s) {
  HurOptions o;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  o.tolerances.iso = s.iso;
  o.seed = s.seed;
  return o;
}

Certificate admissibility_certificate(const Fixture& fx, const ControlSpec& phi,
                                      const DomainSpec& dom, const ScenarioConfig& s) {
  const AdmissibilityReport a =
      admissibility_audit(fx.map, phi, dom, s.probes, s.seed ^ kAuditSalt);
  Certificate c;
  c.id = "admissibility";
  c.anchor = kAnchorAdmissible;
  c.measured = a.max_excess;
  c.bound = 0.0;
  c.margin = -a.max_excess;
  c.samples = a.samples;
  c.status = a.pass ? Status::Pass : Status::Fail;
  return c;
}

std::vector<Certificate> run_corrector(const ScenarioConfig& s, const Fixture& fx,
                                       const ControlSpec& phi, const DomainSpec& dom) {
  const Corrector corr(fx.map, phi, dom, corrector_options(s));
  const auto points = probe_points(s, kProbeSalt);
  std::vector<Certificate> certs = corr.decompose(chain_pairs(points)).certificates;
  CertificateAccumulator truth("ground-truth", kAnchorTruth, s.iso);
  for (const auto& x : points) {
    try {
      truth.add(vec_norm(corr.extend(x) - fx.truth.isometry(x)), 0.0);
    } catch (const NonConvergenceError&) {
      truth.add_indeterminate();
    }
  }
  certs.push_back(truth.result());
  certs.push_back(admissibility_certificate(fx, phi, dom, s));
  return certs;
}

std::vector<Certificate> run_asymptotics(const ScenarioConfig& s, const Fixture& fx) {
  const AsymptoticsConfig& a = s.asymptotics;
  AsymptoticScenario sc;
  sc.p = a.p;
  sc.mode = a.mode == "min_norm" ? AsymptoticMode::MinNorm : AsymptoticMode::MaxNorm;
  sc.epsilon_grid = a.epsilons;
  std::vector<double> thresholds;
  for (const double eps : a.epsilons) {
    if (a.thresholds == "analytic") {
      const auto& decay = std::get<fixture::AsymptoticDecay>(s.fixture_spec().kind);
      thresholds.push_back(decay_threshold(decay.decay, eps));
    } else {
      thresholds.push_back(estimate_threshold(fx.map, sc.p, sc.mode, eps, {}, s.seed));
    }
  }
  const std::vector<double> grid = a.epsilons;
  sc.k_map = [grid, thresholds](double eps) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == eps) return thresholds[i];
    }
    return 0.0;
  };
  std::vector<Certificate> certs;
  certs.push_back(verify_asymptotic_hypothesis(fx.map, sc, {}, s.seed).certificate);
  const ClosenessReport r = asymptotic_closeness(fx.map, sc, probe_points(s, kProbeSalt), s.iso,
                                                 {}, s.seed, corrector_options(s));
  certs.insert(certs.end(), r.certificates.begin(), r.certificates.end());
  return certs;
}

std::vector<Certificate> run_engine(const ScenarioConfig& s) {
  const Fixture fx = generate(s.fixture_spec(), s.seed);
  const ControlSpec phi = s.control ? s.control->build() : fx.control;
  const DomainSpec dom = s.domain ? s.domain->build() : fx.domain;
  switch (s.engine) {
    case Engine::Corrector: return run_corrector(s, fx, phi, dom);
    case Engine::Superstability:
      return {superstability_check(fx.map, phi, dom, probe_points(s, kProbeSalt),
                                   corrector_options(s))
                  .certificate};
    case Engine::Uniqueness:
      return {check_uniqueness(fx.map, phi, dom, dom.scale(), s.c_alt, probe_points(s, kProbeSalt),
                               corrector_options(s))
                  .certificate};
    case Engine::Homogeneity:
      return {homogeneity_shortcut(fx.map, dom.scale(), probe_points(s, kProbeSalt),
                                   s.homogeneity_tol)
                  .certificate};
    case Engine::Hur: {
      const HurControl h = HurControl::make(s.hur_control->build());
      const auto xs = probe_points(s, kProbeSalt);
      const auto ys = probe_points(s, kPartnerSalt);
      std::vector<ProbePair> pairs;
      for (std::size_t i = 0; i < xs.size(); ++i) pairs.emplace_back(xs[i], ys[i]);
      return hur_run(fx.map, h, pairs, hur_options(s)).certificates;
    }
    case Engine::CrossValidate: {
      const HurControl h = HurControl::make(s.hur_control->build());
      return {cross_validate(fx.map, phi, dom, h, probe_points(s, kProbeSalt), s.iso,
                             corrector_options(s), hur_options(s))
                  .certificate};
    }
    case Engine::Asymptotics: return run_asymptotics(s, fx);
  }
  return {};
}

}  // namespace

void apply(const Overrides& o, ScenarioConfig& s) {
  if (o.seed) s.seed = *o.seed;
  if (o.tol) s.tol = *o.tol;
  if (o.max_iter) s.max_iter = *o.max_iter;
}

ScenarioReport run_scenario(const ScenarioConfig& s) {
  ScenarioReport r;
  r.scenario = s.name;
  r.engine = to_string(s.engine);
  r.seed = s.seed;
  r.config_digest = s.digest();
  try {
    r.certificates = run_engine(s);
  } catch (const std::exception& e) {
    r.certificates.clear();
    r.error = e.what();
  }
  return r;
}

std::vector<ScenarioReport> run_suite(const std::vector<ScenarioConfig>& scenarios, int jobs) {
  std::vector<ScenarioReport> out(scenarios.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) out[i] = run_scenario(scenarios[i]);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

int exit_code(const std::vector<ScenarioReport>& reports) {
  bool failed = false;
  for (const auto& r : reports) {
    if (r.error) return kEngineError;
    if (!all_ok(r.certificates)) failed = true;
  }
  return failed ? kCertificateFailure : kAllPass;
}

}  // namespace hcm::cli
