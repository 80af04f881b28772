#include <cmath>

#include "doctest.h"
#include "hcm/domains.hpp"
#include "hcm/errors.hpp"
#include "hcm/random.hpp"

using namespace hcm;

namespace {

ModuleVector with_norm(double r, int k = 3, std::uint64_t seed = 1) {
  Rng rng(seed);
  return random_vector_with_norm(rng, 1, k, r);
}

int scan_oracle(double c, double norm, double lo, double hi) {
  for (int n = 0;; ++n) {
    const double r = norm * std::pow(c, -n);
    if (r >= lo && r <= hi) return n;
  }
}

}  // namespace

TEST_CASE("membership") {
  CHECK(DomainSpec::full(2.0).contains(with_norm(1e6), with_norm(1e-6)));
  const auto ball = DomainSpec::ball_product(1.0, 2.0);
  CHECK_FALSE(ball.contains(with_norm(0.5), with_norm(2.0)));
  CHECK(ball.contains(with_norm(0.5), with_norm(1.0)));
  const auto ext = DomainSpec::exterior_union(3.0, 0.5);
  CHECK(ext.contains(with_norm(1.0), with_norm(5.0)));
  CHECK_FALSE(ext.contains(with_norm(1.0), with_norm(2.0)));
  CHECK(ext.in_delta(with_norm(3.0)));
  const auto bu = DomainSpec::ball_union(1.0, 2.0);
  CHECK(bu.contains(with_norm(0.5), with_norm(1e9)));
  CHECK_FALSE(bu.in_delta(with_norm(2.0)));
}

TEST_CASE("reach index") {
  const auto ball = DomainSpec::ball_product(1.0, 2.0);
  const auto ext = DomainSpec::exterior_product(1.0, 0.5);
  CHECK(reach_index(ball, with_norm(0.7)) == 0);
  CHECK(reach_index(ball, with_norm(5.0)) == 3);
  CHECK(reach_index(ext, with_norm(0.3)) == 2);
  CHECK(reach_index(ext, with_norm(4.0)) == 0);
  CHECK_THROWS_AS(reach_index(ball, ModuleVector(1, 3)), DomainError);

  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const double r = log_uniform(rng, 1e-6, 1e6);
    const ModuleVector x = random_vector_with_norm(rng, 2, 2, r);
    const double nx = vec_norm(x);
    CHECK(reach_index(ball, x) == scan_oracle(2.0, nx, 0.0, 1.0));
    CHECK(reach_index(ext, x) == scan_oracle(0.5, nx, 1.0, INFINITY));
    CHECK(ball.in_delta(scale_down(ball, x, reach_index(ball, x))));
  }
}

TEST_CASE("incompatible scale factors are rejected") {
  CHECK_THROWS_AS(DomainSpec::ball_product(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(DomainSpec::exterior_product(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(DomainSpec::exterior_union(1.0, 3.0), DomainError);
  CHECK_THROWS_AS(DomainSpec::ball_union(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(DomainSpec::full(1.0), DomainError);
  CHECK_THROWS_AS(DomainSpec::full(-2.0), DomainError);
  CHECK_THROWS_AS(DomainSpec::ball_product(1.0, 2.0).with_scale(0.5), DomainError);
  CHECK(DomainSpec::ball_product(1.0, 2.0).with_scale(3.0).scale() == 3.0);
}

TEST_CASE("axiom validation") {
  CHECK(validate_axioms(DomainSpec::full(2.0), 10, 1).pass);
  CHECK(validate_axioms(DomainSpec::full(2.0), 10, 1).analytic);

  SUBCASE("a sampled custom ball passes") {
    const auto ball = DomainSpec::custom(
        "ball", [](const ModuleVector& x, const ModuleVector& y) {
          return vec_norm(x) <= 2.0 && vec_norm(y) <= 2.0;
        },
        2.0);
    const auto r = validate_axioms(ball, 50, 3);
    CHECK(r.pass);
    CHECK_FALSE(r.analytic);
  }
  SUBCASE("the norm-sum shell fails scaling") {
    auto member = [](const ModuleVector& x, const ModuleVector& y) {
      return std::abs(vec_norm(x) + vec_norm(y) - 1.0) <= 1e-12;
    };
    auto sampler = [](Rng& rng, int d, int k) {
      const double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      return std::pair{random_vector_with_norm(rng, d, k, a), random_vector_with_norm(rng, d, k, 1.0 - a)};
    };
    for (const double c : {0.5, 2.0, 3.0}) {
      const auto r = validate_axioms(DomainSpec::custom("shell", member, c, sampler), 20, 4);
      CHECK_FALSE(r.pass);
      REQUIRE(r.violation.has_value());
      CHECK(r.violation->axiom == "scaling");
    }
  }
  SUBCASE("an empty diagonal is reported") {
    const auto lopsided = DomainSpec::custom(
        "lopsided", [](const ModuleVector& x, const ModuleVector& y) {
          return vec_norm(x) <= 1.0 && vec_norm(y) >= 1e9;
        },
        2.0);
    CHECK_FALSE(validate_axioms(lopsided, 20, 5).pass);
  }
}

TEST_CASE("probe samplers stay in range") {
  Rng rng(6);
  const auto ball = DomainSpec::ball_product(1.0, 2.0);
  for (const auto& x : delta_probes(ball, rng, 2, 2, 64)) CHECK(ball.in_delta(x));
  for (int t = 0; t < 200; ++t) {
    const auto [x, y] = sample_pair(DomainSpec::exterior_union(3.0, 0.5), rng, 1, 2);
    CHECK(std::max(vec_norm(x), vec_norm(y)) >= 3.0);
  }
  const auto pts = stratified_probes(rng, 1, 2, 32, 1e-2, 1e2);
  CHECK(pts.size() == 32);
  for (const auto& x : pts) {
    CHECK(vec_norm(x) >= 1e-2 * (1 - 1e-12));
    CHECK(vec_norm(x) <= 1e2 * (1 + 1e-12));
  }
}
