#include <cmath>

#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/fixtures.hpp"
#include "hcm/hur.hpp"
#include "hcm/random.hpp"

using namespace hcm;

namespace {

std::vector<ProbePair> random_pairs(Rng& rng, int d, int k, int count) {
  std::vector<ProbePair> out;
  for (int i = 0; i < count; ++i) {
    out.emplace_back(random_vector_with_norm(rng, d, k, log_uniform(rng, 1e-2, 1e2)),
                     random_vector_with_norm(rng, d, k, log_uniform(rng, 1e-2, 1e2)));
  }
  return out;
}

}  // namespace

TEST_CASE("additive maps have zero defect") {
  const auto fx = generate({fixture::ExactIsometry{}, 2, 2, 3}, 31);
  const auto h = HurControl::make(ControlSpec::power_sum(0.01, 1));
  Rng rng(32);
  for (const auto& m : additive_defect(fx.map, h, random_pairs(rng, 2, 2, 100))) {
    CHECK(m.pass);
    CHECK(m.defect <= 1e-12 * (1 + m.bound));
  }
}

TEST_CASE("tail-shift defect and distance bounds") {
  for (const double p : {0.5, 1.0, 3.0}) {
    CAPTURE(p);
    const auto fx = generate({fixture::TailShift{GProfile::sum_phase(0.01, p)}, 1, 2, 3}, 33);
    const auto h = HurControl::make(fx.control);
    Rng rng(34);
    const auto pairs = random_pairs(rng, 1, 2, 64);
    for (const auto& m : additive_defect(fx.map, h, pairs)) CHECK(m.defect <= m.bound + 1e-10);
    const auto res = hur_run(fx.map, h, pairs);
    CHECK(all_ok(res.certificates));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& x = pairs[i].first;
      CHECK(vec_norm(res.isometry_eval(x) - fx.truth.isometry(x)) <= 1e-8 * std::max(1.0, vec_norm(x)));
      CHECK(res.distances[i] <= res.psi_tilde_values[i] + 1e-10);
    }
    for (const auto& chain : res.chains) {
      for (const auto& g : chain) CHECK(g.gap <= g.bound * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("distance at unit norm for p = 1") {
  const auto fx = generate({fixture::TailShift{GProfile::sum_phase(0.01, 1)}, 1, 1, 2}, 35);
  const auto h = HurControl::make(fx.control);
  Rng rng(36);
  const auto x = random_vector_with_norm(rng, 1, 1, 1.0);
  const double bound = std::sqrt(0.24) / (2.0 - std::sqrt(2.0));
  const double dist = vec_norm(fx.map(x) - hur_correct(fx.map, h, x));
  CHECK(dist <= bound);
  // |g(x)| = sqrt(phi(x, x)) = sqrt(0.02)
  CHECK(dist == doctest::Approx(std::sqrt(0.02)).epsilon(1e-9));
  CHECK(psi_tilde(h, x).value == doctest::Approx(bound).epsilon(1e-13));
}

TEST_CASE("series certificate only for power sums") {
  const auto fx = generate({fixture::TailShift{GProfile::sum_phase(0.01, 0.5)}, 1, 1, 2}, 37);
  Rng rng(38);
  const auto pairs = random_pairs(rng, 1, 1, 8);
  auto find = [](const HurResult& r, const std::string& id) {
    for (const auto& c : r.certificates)
      if (c.id == id) return c;
    FAIL("missing certificate " << id);
    return Certificate{};
  };
  CHECK(find(hur_run(fx.map, HurControl::make(fx.control), pairs), "series").status == Status::Pass);
  const auto custom = ControlSpec::custom("sum", [](const ModuleVector& a, const ModuleVector& b) {
    return 0.01 * (std::sqrt(vec_norm(a)) + std::sqrt(vec_norm(b)));
  });
  const auto r = hur_run(fx.map, HurControl::make(custom, HurBranch::Contractive), pairs);
  CHECK(find(r, "series").status == Status::NotApplicable);
  CHECK(find(r, "linearity").status == Status::Info);
}

TEST_CASE("cross validation with the restricted corrector") {
  const auto fx = generate({fixture::ExactIsometry{}, 1, 2, 3}, 39);
  Rng rng(40);
  const auto probes = stratified_probes(rng, 1, 2, 16, 1e-2, 1e2);
  const auto r = cross_validate(fx.map, ControlSpec::power_product(0.01, 2, 2), DomainSpec::full(2.0),
                                HurControl::make(ControlSpec::power_sum(0.01, 3)), probes);
  CHECK(r.max_gap <= 1e-10);
  CHECK(r.certificate.status == Status::Pass);
}

TEST_CASE("non-convergence is reported") {
  const auto fx = generate({fixture::TailShift{GProfile::sum_phase(1.0, 0.5)}, 1, 1, 2}, 42);
  const auto h = HurControl::make(fx.control);
  HurOptions opts;
  opts.max_iter = 3;
  Rng rng(41);
  const auto x = random_vector_with_norm(rng, 1, 1, 1.0);
  try {
    hur_extrapolate(fx.map, h, x, opts);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.last_gap() == doctest::Approx(chain_tail(h, x, 3)));
  }
}
