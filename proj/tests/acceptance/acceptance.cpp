// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hcm/asymptotics.hpp"
#include "hcm/corrector.hpp"
#include "hcm/errors.hpp"
#include "hcm/fixtures.hpp"
#include "hcm/hur.hpp"
#include "hcm/kernel.hpp"
#include "hcm/random.hpp"

using namespace hcm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int g_failures = 0;

void run(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && secs > limit_s) {
    o.pass = false;
    o.detail << " [runtime " << secs << " s over " << limit_s << " s]";
  }
  if (!o.pass) ++g_failures;
  std::printf("criterion %2d: %s  %s (%.2f s)%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(),
              secs, o.detail.str().c_str());
  std::fflush(stdout);
}

// Largest singular value from the Hermitian eigenproblem of a* a.
double norm_oracle(const Matrix& a) {
  const Matrix g = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// sum_i x_i y_i^* by coordinates.
Matrix inner_oracle(const ModuleVector& x, const ModuleVector& y) {
  Matrix s = Matrix::Zero(x.dim(), x.dim());
  for (int i = 0; i < x.rank(); ++i) s += x.coord(i).matrix() * y.coord(i).matrix().adjoint();
  return s;
}

std::vector<ModuleVector> probe_points(std::uint64_t seed, int d, int k, int count) {
  Rng rng(seed);
  return stratified_probes(rng, d, k, count, 1e-2, 1e2);
}

// The four restricted-domain certificates plus sharpness and round-trip on Delta.
void stability_checks(Outcome& o, const Fixture& fx, const ControlSpec& phi, const DomainSpec& dom,
                      const std::vector<ModuleVector>& points, const std::string& label) {
  CorrectorOptions opts;
  opts.tol = 1e-10;
  const Corrector corr(fx.map, phi, dom, opts);
  const CorrectionResult res = corr.decompose(chain_pairs(points));
  for (const auto& c : res.certificates) {
    o.require(c.status == Status::Pass, label + " " + c.id + " measured " + std::to_string(c.measured));
  }
  double worst_sharp = 0.0;
  double worst_truth = 0.0;
  int on_delta = 0;
  for (const auto& x : points) {
    const ModuleVector ix = corr.extend(x);
    worst_truth = std::max(worst_truth, vec_norm(ix - fx.truth.isometry(x)));
    if (!dom.in_delta(x)) continue;
    ++on_delta;
    const double margin = std::sqrt(phi(x, x)) - vec_norm(fx.map(x) - ix);
    worst_sharp = std::max(worst_sharp, std::abs(margin));
  }
  o.require(on_delta > 0, label + " no probes in Delta");
  o.require(worst_sharp <= 1e-8, label + " diagonal margin " + std::to_string(worst_sharp));
  o.require(worst_truth <= 1e-8, label + " ground truth gap " + std::to_string(worst_truth));
  o.detail << " " << label << ": delta-probes=" << on_delta << " sharp=" << worst_sharp
           << " truth=" << worst_truth << ";";
}

int reach_oracle(const DomainSpec& dom, double norm) {
  const auto [lo, hi] = *dom.delta_norm_range();
  for (int n = 0;; ++n) {
    const double r = std::pow(dom.scale(), -static_cast<double>(n)) * norm;
    if (r >= lo && r <= hi) return n;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_code(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  run(1, "kernel axioms, Cauchy-Schwarz, |x| norm, C*-identity on 1e4 triples", 30.0, [](Outcome& o) {
    Rng rng(0xc1);
    std::uniform_int_distribution<int> dd(1, 4);
    std::uniform_int_distribution<int> kk(1, 6);
    const double tol = 1e-11;
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const int d = dd(rng);
      const int k = kk(rng);
      const ModuleVector x = random_vector(rng, d, k);
      const ModuleVector y = random_vector(rng, d, k);
      const ModuleVector z = random_vector(rng, d, k);
      const AlgebraElement a = random_element(rng, d);
      const Complex lambda = random_complex(rng);
      const double nx = norm_oracle(x.blocks());
      const double ny = norm_oracle(y.blocks());
      const double nz = norm_oracle(z.blocks());
      const double na = norm_oracle(a.matrix());

      auto rel = [&](double err, double scale) {
        const double r = err / std::max(scale, 1e-300);
        worst = std::max(worst, r);
        return r <= tol;
      };
      const Matrix lhs2 = inner(lambda * x + y, z).matrix();
      const Matrix rhs2 = lambda * inner_oracle(x, z) + inner_oracle(y, z);
      o.require(rel(norm_oracle(lhs2 - rhs2), (std::abs(lambda) * nx + ny) * nz), "axiom (ii)");
      const Matrix lhs3 = inner(a * x, y).matrix();
      const Matrix rhs3 = a.matrix() * inner_oracle(x, y);
      o.require(rel(norm_oracle(lhs3 - rhs3), na * nx * ny), "axiom (iii)");
      const Matrix lhs4 = inner(x, y).matrix().adjoint();
      o.require(rel(norm_oracle(lhs4 - inner_oracle(y, x)), nx * ny), "axiom (iv)");
      o.require(norm_oracle(inner(x, y).matrix()) <= nx * ny * (1.0 + tol), "Cauchy-Schwarz");
      o.require(rel(std::abs(vec_norm(x) - nx), nx), "vec_norm");
      o.require(rel(std::abs(op_norm(abs_value(x)) - nx), nx), "|| |x| || = ||x||");
      const double ca = op_norm(a.adjoint() * a);
      o.require(rel(std::abs(ca - na * na), na * na), "C*-identity");
      if (!o.pass) return;
    }
    o.detail << " worst relative error " << worst;
  });

  const int d = 1;
  const int k = 8;
  FixtureSpec flagship{fixture::TailShift{GProfile::power_phase(0.25, 2.0, 2.0)}, d, k, k + 1};
  const Fixture tail = generate(flagship, 2);

  run(2, "sharp tail-shift on the full module, c = 2", 10.0, [&](Outcome& o) {
    stability_checks(o, tail, tail.control, DomainSpec::full(2.0), probe_points(0xc2, d, k, 256),
                     "full");
  });

  run(3, "restricted domains with the reach index", 0.0, [&](Outcome& o) {
    const auto points = probe_points(0xc3, d, k, 256);
    const DomainSpec ball = DomainSpec::ball_product(1.0, 2.0);
    stability_checks(o, tail, tail.control, ball, points, "ball");
    // c = 1/2 needs exponents below 1 for the vanishing condition.
    FixtureSpec ext_spec{fixture::TailShift{GProfile::power_phase(0.25, 0.5, 0.5)}, d, k, k + 1};
    const Fixture ext = generate(ext_spec, 3);
    const DomainSpec exterior = DomainSpec::exterior_product(1.0, 0.5);
    stability_checks(o, ext, ext.control, exterior, points, "exterior");
    int mismatches = 0;
    for (const auto& x : points) {
      for (const DomainSpec* dom : {&ball, &exterior}) {
        if (reach_index(*dom, x) != reach_oracle(*dom, vec_norm(x))) ++mismatches;
      }
    }
    o.require(mismatches == 0, "reach_index mismatches " + std::to_string(mismatches));
  });

  run(4, "uniqueness across c = 2 and c = 3", 0.0, [&](Outcome& o) {
    const Report r = check_uniqueness(tail.map, tail.control, DomainSpec::full(2.0), 2.0, 3.0,
                                      probe_points(0xc4, d, k, 256), CorrectorOptions{});
    o.require(r.pass && r.max_value <= 1e-8, "gap " + std::to_string(r.max_value));
    o.detail << " max gap " << r.max_value;
  });

  run(5, "superstability of square perturbed isometries", 0.0, [&](Outcome& o) {
    struct Case {
      ControlSpec phi;
      DomainSpec dom;
    };
    const std::vector<Case> cases = {
        {ControlSpec::power_product(0.25, 2.0, 2.0), DomainSpec::full(2.0)},
        {ControlSpec::power_product(0.25, 2.0, 2.0), DomainSpec::ball_product(1.0, 2.0)},
        {ControlSpec::power_product(0.25, 0.5, 0.5), DomainSpec::exterior_product(1.0, 0.5)},
        {ControlSpec::power_sum(0.01, 0.5), DomainSpec::full(0.5)},
    };
    const std::vector<std::pair<int, int>> dims = {{1, 2}, {1, 3}, {1, 5}, {2, 2}};
    double worst = 0.0;
    std::uint64_t seed = 50;
    for (const auto& [dd, kk] : dims) {
      for (const auto& c : cases) {
        FixtureSpec spec{fixture::PerturbedIsometry{c.phi, 0.9, c.dom}, dd, kk, kk};
        const Fixture fx = generate(spec, ++seed);
        const Report r = superstability_check(fx.map, c.phi, c.dom,
                                              probe_points(seed, dd, kk, 64), CorrectorOptions{});
        o.require(r.applicable && r.pass, "d=" + std::to_string(dd) + " k=" + std::to_string(kk) +
                                              " " + c.dom.describe());
        worst = std::max(worst, r.max_value);
      }
    }
    o.require(worst <= 1e-8, "max ||T|| " + std::to_string(worst));
    o.detail << " max ||T(x)|| on Delta " << worst;
  });

  run(6, "homogeneous map is its own isometry", 0.0, [&](Outcome& o) {
    FixtureSpec spec{fixture::Homogeneous{2.0}, 2, 3, 4};
    const Fixture fx = generate(spec, 6);
    const auto points = probe_points(0xc6, 2, 3, 256);
    const HomogeneityReport h = homogeneity_shortcut(fx.map, 2.0, points, 1e-12);
    o.require(h.homogeneous, "homogeneity not detected");
    o.require(h.certificate.status == Status::Pass, "shortcut deviation");
    const Corrector corr(fx.map, fx.control, fx.domain);
    double worst = 0.0;
    for (const auto& x : points) worst = std::max(worst, vec_norm(corr.extend(x) - fx.map(x)));
    o.require(worst <= 1e-12, "I - f " + std::to_string(worst));
    o.detail << " max ||I(x) - f(x)|| " << worst;
  });

  run(7, "additive-defect bounds for power-sum controls", 60.0, [&](Outcome& o) {
    const double beta = 0.01;
    for (const double p : {0.0, 0.5, 1.0, 1.5, 3.0}) {
      FixtureSpec spec{fixture::TailShift{GProfile::sum_phase(beta, p)}, 1, 3, 4};
      const Fixture fx = generate(spec, 70 + static_cast<std::uint64_t>(p * 10));
      const HurControl h = HurControl::make(ControlSpec::power_sum(beta, p));
      Rng rng(0xc7 + static_cast<std::uint64_t>(p * 10));
      std::vector<ProbePair> pairs;
      for (int i = 0; i < 1000; ++i) {
        const ModuleVector x = random_vector_with_norm(rng, 1, 3, log_uniform(rng, 1e-2, 1e2));
        const ModuleVector y = random_vector_with_norm(rng, 1, 3, log_uniform(rng, 1e-2, 1e2));
        pairs.emplace_back(x, y);
      }
      const HurResult r = hur_run(fx.map, h, pairs);
      for (const auto& c : r.certificates) {
        o.require(is_ok(c.status), "p=" + std::to_string(p) + " " + c.id + " measured " +
                                       std::to_string(c.measured) + " bound " +
                                       std::to_string(c.bound));
      }
      // Closed form evaluated independently of the library.
      double worst_form = 0.0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double nx = vec_norm(pairs[i].first);
        const double closed = std::sqrt(6.0 * beta * (std::pow(2.0, p) + 2.0)) *
                              std::pow(nx, p / 2.0) / std::abs(std::pow(2.0, p / 2.0) - 2.0);
        worst_form = std::max(worst_form, std::abs(closed - r.psi_tilde_values[i]) / closed);
      }
      o.require(worst_form <= 1e-12, "psi~ closed form mismatch");
      o.detail << " p=" << p << ":" << to_string(r.branch);
    }
    bool rejected = false;
    try {
      HurControl::make(ControlSpec::power_sum(beta, 2.0));
    } catch (const UnsupportedExponentError&) {
      rejected = true;
    }
    o.require(rejected, "p = 2 accepted");
  });

  run(8, "restricted-domain and additive isometries agree", 0.0, [&](Outcome& o) {
    const double beta = 0.01;
    FixtureSpec spec{fixture::TailShift{GProfile::sum_phase(beta, 1.0)}, 2, 2, 3};
    const Fixture fx = generate(spec, 8);
    const ControlSpec product = ControlSpec::power_product(2.0 * beta, 0.5, 0.5);
    const auto points = probe_points(0xc8, 2, 2, 128);
    const auto audit = admissibility_audit(fx.map, product, DomainSpec::full(0.5), 512, 88);
    o.require(audit.pass, "fixture not admissible under the product control");
    const CrossReport r = cross_validate(fx.map, product, DomainSpec::full(0.5),
                                         HurControl::make(ControlSpec::power_sum(beta, 1.0)),
                                         points, 1e-8);
    o.require(r.certificate.status == Status::Pass, "gap " + std::to_string(r.max_gap));
    o.detail << " max gap " << r.max_gap;
  });

  run(9, "asymptotic closeness for p = 1/2", 60.0, [&](Outcome& o) {
    FixtureSpec spec{fixture::AsymptoticDecay{0.5, DecayProfile::InverseSqrt}, 1, 2, 3};
    const Fixture fx = generate(spec, 9);
    const std::vector<double> grid = {1e-1, 1e-2, 1e-3};
    std::vector<double> estimated;
    for (const double eps : grid) {
      const double k_est = estimate_threshold(fx.map, 0.5, AsymptoticMode::MaxNorm, eps);
      o.require(std::isfinite(k_est), "no threshold for eps " + std::to_string(eps));
      estimated.push_back(k_est);
      o.detail << " K(" << eps << ")=" << k_est << " (closed form "
               << decay_threshold(DecayProfile::InverseSqrt, eps) << ")";
    }
    AsymptoticScenario s;
    s.p = 0.5;
    s.epsilon_grid = grid;
    s.k_map = [grid, estimated](double eps) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == eps) return estimated[i];
      }
      return 1.0;
    };
    const auto hyp = verify_asymptotic_hypothesis(fx.map, s);
    o.require(hyp.pass, "hypothesis ratio above eps");
    Rng rng(0xc9);
    const auto probes = stratified_probes(rng, 1, 2, 64, 1e-2, 1e2);
    const ClosenessReport r = asymptotic_closeness(fx.map, s, probes, 1e-8);
    for (const auto& c : r.certificates) {
      o.require(c.status == Status::Pass, c.id + " measured " + std::to_string(c.measured));
    }
    for (const auto& row : r.rows) o.detail << " sup(" << row.eps << ")=" << row.measured;
    o.detail << " collapse=" << r.collapse_gap;
  });

  run(10, "CLI determinism and exit codes", 0.0, [](Outcome& o) {
    namespace fs = std::filesystem;
    const std::string cli = HCM_CLI_PATH;
    const std::string cfg = HCM_CONFIG_DIR;
    const fs::path dir = fs::temp_directory_path() / "hcm_acceptance";
    fs::create_directories(dir);
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();
    const std::string suite = cfg + "/acceptance_suite.yaml";
    const int ea = exit_code(cli + " --config " + suite + " --out " + a + " >/dev/null 2>&1");
    const int eb = exit_code(cli + " --config " + suite + " --out " + b + " >/dev/null 2>&1");
    const std::string ja = read_file(a);
    o.require(!ja.empty(), "empty report");
    o.require(ja == read_file(b), "reports differ");
    o.require(ea == 0 && eb == 0, "suite exit codes " + std::to_string(ea) + "," + std::to_string(eb));
    const int e_missing = exit_code(cli + " --config " + (dir / "missing.yaml").string() + " >/dev/null 2>&1");
    o.require(e_missing == 2, "missing config exit " + std::to_string(e_missing));
    const int e_p2 = exit_code(cli + " --config " + cfg + "/hur_p2.yaml --out " +
                               (dir / "p2.json").string() + " >/dev/null 2>&1");
    o.require(e_p2 == 3, "p = 2 exit " + std::to_string(e_p2));
    const int e_fail = exit_code(cli + " --config " + cfg + "/undersized_control.yaml --out " +
                                 (dir / "fail.json").string() + " >/dev/null 2>&1");
    o.require(e_fail == 1, "failing certificate exit " + std::to_string(e_fail));
    o.detail << " report bytes " << ja.size();
  });

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
