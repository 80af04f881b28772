#include <cmath>

#include "doctest.h"
#include "hcm/corrector.hpp"
#include "hcm/errors.hpp"
#include "hcm/fixtures.hpp"
#include "hcm/random.hpp"

using namespace hcm;

namespace {

Fixture shift_fixture(int d, int k, std::uint64_t seed = 21) {
  return generate({fixture::TailShift{GProfile::power_phase(0.01, 2, 2)}, d, k, k + 1}, seed);
}

Matrix shift_oracle(int d, int k) {
  Matrix b = Matrix::Zero(k * d, (k + 1) * d);
  for (int i = 0; i < k * d; ++i) b(i, i + d) = 1.0;
  return b;
}

}  // namespace

TEST_CASE("cauchy gaps stay inside the envelope") {
  const auto fx = shift_fixture(2, 2);
  const Corrector corr(fx.map, fx.control, DomainSpec::full(2.0));
  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_vector_with_norm(rng, 2, 2, log_uniform(rng, 1e-2, 1e3));
    for (const auto& s : corr.cauchy_trace(x, 40)) {
      CHECK(s.gap <= s.bound * (1 + 1e-9) + 1e-13 * vec_norm(x));
    }
    CHECK(corr.tail_bound(x, 10) >= corr.tail_bound(x, 20));
  }
}

TEST_CASE("extrapolation against a 60-step oracle") {
  const auto fx = generate(
      {fixture::PerturbedIsometry{ControlSpec::power_product(0.01, 2, 2)}, 1, 4, 5}, 23);
  const Corrector corr(fx.map, fx.control, DomainSpec::full(2.0));
  Rng rng(24);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_vector_with_norm(rng, 1, 4, log_uniform(rng, 1e-2, 1e2));
    const auto oracle = std::ldexp(1.0, 60) * fx.map(std::ldexp(1.0, -60) * x);
    const auto e = corr.extrapolate_on_delta(x);
    CHECK(vec_norm(e.value - oracle) <= 1e-10 * std::max(1.0, vec_norm(x)));
    CHECK(vec_norm(e.value - fx.truth.isometry(x)) <= 1e-10 * std::max(1.0, vec_norm(x)));
  }
}

TEST_CASE("materialize recovers the shift") {
  const auto fx = shift_fixture(1, 4);
  const Corrector corr(fx.map, fx.control, DomainSpec::full(2.0));
  CorrectionResult result;
  const Matrix b = materialize(corr, result, 200);
  CHECK(op_norm(Matrix(b - shift_oracle(1, 4))) <= 1e-9);
  REQUIRE(result.materialized.has_value());
}

TEST_CASE("extension through the reach index") {
  const auto fx = shift_fixture(1, 2);
  const auto ball = DomainSpec::ball_product(1.0, 2.0);
  const Corrector corr(fx.map, fx.control, ball);
  CHECK(vec_norm(corr.extend(ModuleVector(1, 2))) == 0.0);
  Rng rng(25);
  const auto x = random_vector_with_norm(rng, 1, 2, 5.0);
  const auto viaDelta = 8.0 * corr.extrapolate_on_delta((1.0 / 8.0) * x).value;
  CHECK(vec_norm(corr.extend(x) - viaDelta) <= 1e-12 * 5.0);
  CHECK(vec_norm(corr.extend(x) - fx.truth.isometry(x)) <= 1e-9);
  CHECK_THROWS_AS(corr.extrapolate_on_delta(x), DomainError);
}

TEST_CASE("decomposition certificates") {
  const auto fx = shift_fixture(2, 2);
  const Corrector corr(fx.map, fx.control, DomainSpec::full(2.0));
  Rng rng(26);
  const auto pts = stratified_probes(rng, 2, 2, 16, 1e-2, 1e1);
  const auto res = corr.decompose(chain_pairs(pts));
  CHECK(all_ok(res.certificates));
  for (const auto& x : pts) {
    CHECK(vec_norm(res.isometry_eval(x) + res.residual_eval(x) - fx.map(x)) <= 1e-12 * (1 + vec_norm(x)));
    CHECK(vec_norm(res.residual_eval(x) - fx.truth.residual(x)) <= 1e-9 * (1 + vec_norm(x)));
  }
}

TEST_CASE("control failures and scope") {
  const auto fx = shift_fixture(1, 2);
  CHECK_THROWS_AS(Corrector(fx.map, ControlSpec::power_product(1, 1, 1), DomainSpec::full(2.0)),
                  VanishingError);
  Rng rng(27);
  const auto probes = stratified_probes(rng, 1, 2, 8, 0.1, 1.0);
  const auto ss = superstability_check(fx.map, fx.control, DomainSpec::full(2.0), probes, {});
  CHECK_FALSE(ss.applicable);
  CHECK(ss.certificate.status == Status::NotApplicable);

  const auto ball = DomainSpec::ball_product(1.0, 2.0);
  const auto sq = generate(
      {fixture::PerturbedIsometry{ControlSpec::power_product(0.01, 2, 2), 0.9, ball}, 1, 2, 2}, 28);
  const auto ssq = superstability_check(sq.map, sq.control, ball, probes, {});
  CHECK(ssq.applicable);
  CHECK(ssq.pass);
  CHECK(ssq.max_value <= 1e-12);

  const auto uq = check_uniqueness(fx.map, fx.control, DomainSpec::full(2.0), 2.0, 3.0, probes, {});
  CHECK(uq.pass);
}

TEST_CASE("homogeneity shortcut") {
  Rng rng(29);
  const auto probes = stratified_probes(rng, 1, 2, 16, 1e-2, 1e2);
  const auto shift = shift_fixture(1, 2);
  CHECK_FALSE(homogeneity_shortcut(shift.map, 2.0, probes, 1e-10).homogeneous);
  const auto hom = generate({fixture::Homogeneous{2.0}, 1, 2, 3}, 30);
  const auto rep = homogeneity_shortcut(hom.map, 2.0, probes, 1e-10);
  CHECK(rep.homogeneous);
  CHECK(rep.max_deviation <= 1e-10);
}
