// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_fixture.hpp"
#include "krange/krange.hpp"
#include "oracles.hpp"

using namespace krange;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Case {
  std::string name;
  SignedOperatorTuple tuple;
};

/// 100 seeded random full tuples, dims 2..12.
std::vector<Case> random_corpus() {
  std::vector<Case> out;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index dim = 2 + static_cast<Index>(seed % 11);
    const int pos = 1 + static_cast<int>(seed % 3);
    const int neg = static_cast<int>((seed / 3) % 4);
    const double margin = 0.1 + 0.2 * static_cast<double>(seed % 3);
    out.push_back({"random seed " + std::to_string(seed), random_tuple(pos, neg, dim, seed, margin)});
  }
  return out;
}

/// Random corpus plus the structured examples.
std::vector<Case> full_corpus() {
  std::vector<Case> out = random_corpus();
  for (Index n = 2; n <= 4; ++n) out.push_back({"bidisk n=" + std::to_string(n), bidisk_triplet(n)});
  const double r = 1 / std::sqrt(2.0);
  out.push_back({"corona z,z^2", corona_triplet({0, r}, {0, 0, r}, {r}, {r}, 6).tuple});
  out.push_back({"corona mixed", corona_triplet({0.3, 0.4}, {0, 0.5}, {0.6, 0.2}, {0.1, 0, 0.5}, 7).tuple});
  out.push_back({"corona constants", corona_triplet({1}, {0}, {0.5}, {0}, 3).tuple});
  return out;
}

/// Ratio 1/2, 12 points, starting at |T|.
std::vector<double> eps_grid(const SignedOperatorTuple& t) { return geometric_schedule(t.norm(), 0.5, 12); }

/// |u|^2_M(T) computed without the library: D from the ops, T from Eigen's
/// eigensolver, and a complete orthogonal decomposition for T+.
double oracle_pullback_sq(const SignedOperatorTuple& t, const Vector& u) {
  Matrix d = Matrix::Zero(t.dim(), t.dim());
  for (Index j = 0; j < t.size(); ++j) d += t.signature()[j] * t.op(j) * t.op(j).adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()));
  const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix tm = es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return oracle::min_norm_solution(tm, u).squaredNorm();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ------------------------------------------------------------------ criteria

Outcome bidisk_identity() {
  double worst = 0;
  for (Index n = 1; n <= 8; ++n) {
    Matrix expect = Matrix::Identity(n * n, n * n);
    expect(0, 0) = 0.0;
    worst = std::max(worst, (bidisk_triplet(n).defect() - expect).norm());
  }
  return {worst <= 1e-13, "max |D - (I - P0 x P0)|_F = " + fmt(worst) + " over n = 1..8"};
}

Outcome corollary_equality(const std::vector<Case>& corpus) {
  std::mt19937_64 rng(2024);
  double worst_res = 0, worst_eq = 0;
  int failures = 0;
  for (const auto& c : corpus) {
    const Vector u = c.tuple.defect_sqrt() * oracle::random_vector(rng, c.tuple.dim());
    const SolveReport r = solve_exact(c.tuple, u);
    const double target = oracle_pullback_sq(c.tuple, u);
    const double rel_res = r.residual / std::max(u.norm(), 1e-300);
    const double eq = std::abs(r.krein_norm_sq - target);
    worst_res = std::max(worst_res, rel_res);
    worst_eq = std::max(worst_eq, eq);
    if (!(r.residual <= 1e-8 * u.norm()) || !(eq <= 1e-8)) ++failures;
  }
  return {failures == 0, std::to_string(corpus.size()) + " tuples, max residual/|u| = " + fmt(worst_res) +
                             ", max |<z,z>_K - |u|^2_M(T)| = " + fmt(worst_eq)};
}

Outcome monotonicity(const std::vector<Case>& corpus) {
  std::mt19937_64 rng(77);
  int failures = 0, sweeps = 0, bottom_points = 0;
  double worst_drop = 0;
  for (const auto& c : corpus) {
    if (c.tuple.norm() == 0) continue;
    const Vector u = c.tuple.defect_sqrt() * oracle::random_vector(rng, c.tuple.dim());
    const auto grid = eps_grid(c.tuple);
    const SweepReport s = convergence_sweep(c.tuple, u, grid);
    ++sweeps;
    bool ok = true;
    for (std::size_t k = 1; k < s.reports.size(); ++k) {
      const double drop = s.reports[k - 1].krein_norm_sq - s.reports[k].krein_norm_sq;
      worst_drop = std::max(worst_drop, drop);
      if (drop > 1e-10) ok = false;
    }
    for (const auto& r : s.reports)
      if (r.eps < s.smallest_positive_eigenvalue) {
        ++bottom_points;
        if (!(r.residual <= 1e-8)) ok = false;
      }
    if (!ok) ++failures;
  }
  // Hand-computable diagonal case.
  const Matrix z = Matrix::Zero(2, 2);
  const SignedOperatorTuple diag({fixtures::diag({1, 0.5}), z, z}, Signature::triplet());
  const Vector u = fixtures::vec({1, 0.5});
  const double k07 = solve_eps(diag, u, 0.7).krein_norm_sq;
  const double k03 = solve_eps(diag, u, 0.3).krein_norm_sq;
  const bool hand = std::abs(k07 - 1.0) <= 1e-12 && std::abs(k03 - 2.0) <= 1e-12;
  return {failures == 0 && hand, std::to_string(sweeps) + " sweeps, max decrease " + fmt(worst_drop) + ", " +
                                     std::to_string(bottom_points) + " points below lambda_min+; diagonal (0.7, " + fmt(k07) +
                                     "), (0.3, " + fmt(k03) + ")"};
}

Outcome isometry(const std::vector<Case>& corpus) {
  double worst = 0;
  std::uint64_t seed = 0;
  for (const auto& c : corpus) worst = std::max(worst, isometry_check(c.tuple, 200, seed++));
  return {worst <= 1e-9, "max ||Tx|^2 - <bT#x, bT#x>_K| = " + fmt(worst) + " over 200 vectors per tuple"};
}

Outcome shmulyan_agreement() {
  std::mt19937_64 rng(5150);
  int disagreements = 0, in_range = 0, off_range = 0, bad_gamma = 0, bad_witness = 0;
  double worst_gamma = 0;
  for (int q = 0; q < 500; ++q) {
    const Index m = 2 + static_cast<Index>(rng() % 7), n = 1 + static_cast<Index>(rng() % 7);
    const Index r = 1 + static_cast<Index>(rng() % std::min<Index>(m - 1, n));
    const Matrix a = oracle::random_matrix(rng, m, r) * oracle::random_matrix(rng, r, n);
    Vector u = a * oracle::random_vector(rng, n);
    if (q % 2 == 1) u += 1e-3 * u.norm() * oracle::random_vector(rng, m);
    const Preimage p = min_norm_preimage(a, u);
    const ShmulyanResult g = shmulyan_gamma(a, u, 20, static_cast<std::uint64_t>(q));
    if ((g.verdict == RangeVerdict::InRange) != p.in_range) ++disagreements;
    if (p.in_range) {
      ++in_range;
      const double dev = std::abs(g.gamma - dbr_norm(a, u));
      worst_gamma = std::max(worst_gamma, dev);
      if (!(dev <= 1e-7)) ++bad_gamma;
    } else {
      ++off_range;
      bool ok = g.witness.has_value() && std::isinf(g.gamma);
      if (ok) {
        const auto& w = *g.witness;
        ok = std::abs(w.inner) > 0 && w.ratio_path.size() >= 2 &&
             w.ratio_path.back().second > w.ratio_path.front().second;
        // The path ratio must blow up like 1/t.
        ok = ok && w.ratio_path.back().second >= 1e3 * w.ratio_path.front().second;
      }
      if (!ok) ++bad_witness;
    }
  }
  return {disagreements == 0 && bad_gamma == 0 && bad_witness == 0 && in_range > 0 && off_range > 0,
          "500 queries (" + std::to_string(in_range) + " in range, " + std::to_string(off_range) +
              " off), verdict disagreements " + std::to_string(disagreements) + ", max |gamma - dbr_norm| = " +
              fmt(worst_gamma) + ", missing witnesses " + std::to_string(bad_witness)};
}

Outcome lemma_bound(const std::vector<Case>& corpus) {
  int checks = 0, failures = 0;
  double worst = INFINITY;
  for (const auto& c : corpus) {
    if (c.tuple.norm() == 0) continue;
    for (double eps : eps_grid(c.tuple)) {
      const LemmaReport r = check_lemma_bound(c.tuple, eps);
      if (r.vacuous) continue;
      ++checks;
      worst = std::min(worst, r.delta_star - r.bound);
      if (!(r.delta_star >= r.bound - 1e-9)) ++failures;
    }
  }
  return {failures == 0, std::to_string(checks) + " (tuple, eps) pairs, min delta* - bound = " + fmt(worst)};
}

Outcome norm_equality(const std::vector<Case>& corpus) {
  int runs = 0, failures = 0, vacuous = 0;
  double worst = 0;
  std::uint64_t seed = 0;
  for (const auto& c : corpus) {
    if (c.tuple.norm() == 0) continue;
    for (double eps : eps_grid(c.tuple)) {
      if (eps >= c.tuple.norm()) {
        ++vacuous;  // empty band: eps = |T| under the strict cut
        continue;
      }
      const NormEqualityReport r = verify_norm_equality(c.tuple, eps, 20, seed++);
      ++runs;
      worst = std::max(worst, r.max_deviation);
      if (!(r.passed && r.embedding_ok && r.reverse_ok && r.max_deviation <= 1e-7)) ++failures;
    }
  }
  return {failures == 0, std::to_string(runs) + " (tuple, eps) runs x 20 samples, max |n1 - n2| = " + fmt(worst) + ", " +
                             std::to_string(vacuous) + " empty bands skipped"};
}

Outcome complement(const std::vector<Case>& corpus) {
  std::mt19937_64 rng(808);
  int solves = 0, failures = 0;
  double worst_res = 0, worst_eq = 0;
  for (const auto& c : corpus) {
    if (c.tuple.level() != Validity::Full) continue;
    const Matrix s = complement_defect(c.tuple.defect_sqrt());
    const Vector v = s * oracle::random_vector(rng, c.tuple.dim());
    const SolveReport r = solve_complement_exact(c.tuple, v);
    const double target = oracle::min_norm_solution(s, v).squaredNorm();
    ++solves;
    worst_res = std::max(worst_res, r.residual);
    worst_eq = std::max(worst_eq, std::abs(r.krein_norm_sq - target));
    if (!(r.residual <= 1e-8) || !(std::abs(r.krein_norm_sq - target) <= 1e-8)) ++failures;
  }
  const SolveReport b = solve_complement_exact(bidisk_triplet(2), Vector::Unit(4, 0));
  const bool constant_ok = b.residual <= 1e-8 && std::abs(b.krein_norm_sq - 1.0) <= 1e-10;
  return {failures == 0 && constant_ok, std::to_string(solves) + " solves, max residual " + fmt(worst_res) +
                                            ", max |<w,w> - |v|^2_H(T)| = " + fmt(worst_eq) +
                                            "; bidisk constant <w,w> - 1 = " + fmt(b.krein_norm_sq - 1.0)};
}

Outcome proposition(const std::vector<Case>& corpus) {
  int failures = 0;
  double worst = 0, weakest = INFINITY;
  for (const auto& c : corpus) {
    const TTildeReport r = ttilde_properties(c.tuple);
    if (r.vacuous) continue;
    worst = std::max(worst, r.image_residual);
    weakest = std::min(weakest, r.injectivity_sigma_min);
    if (!(r.injective && r.image_is_range && r.image_residual <= 1e-8)) ++failures;
  }
  return {failures == 0, "max column-space residual " + fmt(worst) + ", smallest singular value on bT#L " + fmt(weakest)};
}

Outcome determinism() {
  Scratch dir("krange_acceptance_det");
  const std::string tuple = dir.write("t.json", run_cli({"generate", "random", "--seed", "11", "--dim", "6", "--negatives", "2"}).out);
  const Vector u = io::parse_tuple(io::read_file(tuple)).to_tuple().defect_sqrt() * Vector::Ones(6);
  const std::string uf = dir.write("u.json", io::serialize_vector(u));
  const std::vector<std::vector<std::string>> commands{
      {"generate", "random", "--seed", "11", "--dim", "6", "--negatives", "2"},
      {"generate", "corona", "--n", "5"},
      {"generate", "bidisk", "--n", "3"},
      {"check", tuple, "--seed", "3"},
      {"solve", tuple, uf, "--exact"},
      {"solve", tuple, uf, "--eps", "0.01"},
      {"sweep", tuple, uf, "--eps-grid", "geometric:0.5,0.5,12"},
      {"verify", tuple, "--eps", "0.02", "--samples", "20", "--seed", "5"},
  };
  int mismatches = 0;
  for (const auto& args : commands) {
    const CliResult a = run_cli(args), b = run_cli(args);
    if (a.code != b.code || a.out != b.out || a.out.empty()) ++mismatches;
  }
  return {mismatches == 0, std::to_string(commands.size()) + " commands run twice, " + std::to_string(mismatches) +
                               " byte mismatches"};
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Case> randoms = random_corpus();
  const std::vector<Case> corpus = full_corpus();

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"bidisk defect identity", bidisk_identity},
      {"exact solve norm equality", [&] { return corollary_equality(randoms); }},
      {"monotone convergence", [&] { return monotonicity(corpus); }},
      {"isometry identity", [&] { return isometry(corpus); }},
      {"range criterion agreement", shmulyan_agreement},
      {"uniform positivity bound", [&] { return lemma_bound(corpus); }},
      {"pull-back norm equality", [&] { return norm_equality(corpus); }},
      {"complement solutions", [&] { return complement(corpus); }},
      {"row map on bT#L", [&] { return proposition(corpus); }},
      {"deterministic output", determinism},
  };

  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", index - failed, criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
