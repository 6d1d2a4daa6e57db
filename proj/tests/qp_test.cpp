#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "pdnr/qp.hpp"

using namespace pdnr;

namespace {

double objective(const QpProblem& p, const std::vector<double>& x) {
  double f = 0.0;
  for (int i = 0; i < p.n; ++i)
    f += 0.5 * p.diag[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] +
         p.lin[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
  for (const auto& o : p.off) f += o.v * x[static_cast<size_t>(o.i)] * x[static_cast<size_t>(o.j)];
  return f;
}

// brute-force oracle: enumerate bound-activity patterns, solve each
// equality-constrained KKT system on the free variables, keep the best
// candidate that is feasible
double active_set_enumeration_oracle(const QpProblem& p, double tol = 1e-9) {
  const int n = p.n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd c(n), lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = p.diag[static_cast<size_t>(i)];
    c(i) = p.lin[static_cast<size_t>(i)];
    lo(i) = p.lo[static_cast<size_t>(i)];
    hi(i) = p.hi[static_cast<size_t>(i)];
  }
  for (const auto& o : p.off) {
    H(o.i, o.j) += o.v;
    H(o.j, o.i) += o.v;
  }
  const int m = static_cast<int>(p.eq.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m; ++r) {
    b(r) = p.eq[static_cast<size_t>(r)].rhs;
    for (const auto& [i, v] : p.eq[static_cast<size_t>(r)].coef) A(r, i) += v;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pat(static_cast<size_t>(n), 0);  // 0 free, 1 lo, 2 hi
  while (true) {
    std::vector<int> freev;
    Eigen::VectorXd x(n);
    bool valid = true;
    for (int i = 0; i < n; ++i) {
      if (pat[static_cast<size_t>(i)] == 0) {
        freev.push_back(i);
      } else if (pat[static_cast<size_t>(i)] == 1) {
        if (!std::isfinite(lo(i))) valid = false;
        x(i) = lo(i);
      } else {
        if (!std::isfinite(hi(i))) valid = false;
        x(i) = hi(i);
      }
    }
    if (valid) {
      const int nf = static_cast<int>(freev.size());
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + m, nf + m);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + m);
      for (int a = 0; a < nf; ++a) {
        for (int bb = 0; bb < nf; ++bb) K(a, bb) = H(freev[static_cast<size_t>(a)], freev[static_cast<size_t>(bb)]);
        rhs(a) = -c(freev[static_cast<size_t>(a)]);
        for (int i = 0; i < n; ++i)
          if (pat[static_cast<size_t>(i)] != 0) rhs(a) -= H(freev[static_cast<size_t>(a)], i) * x(i);
        for (int r = 0; r < m; ++r) {
          K(a, nf + r) = A(r, freev[static_cast<size_t>(a)]);
          K(nf + r, a) = A(r, freev[static_cast<size_t>(a)]);
        }
      }
      for (int r = 0; r < m; ++r) {
        rhs(nf + r) = b(r);
        for (int i = 0; i < n; ++i)
          if (pat[static_cast<size_t>(i)] != 0) rhs(nf + r) -= A(r, i) * x(i);
      }
      Eigen::VectorXd sol(nf + m);
      bool solved = true;
      if (nf + m > 0) {
        sol = K.completeOrthogonalDecomposition().solve(rhs);
        solved = (K * sol - rhs).lpNorm<Eigen::Infinity>() < 1e-7;
      }
      if (solved) {
        for (int a = 0; a < nf; ++a) x(freev[static_cast<size_t>(a)]) = sol(a);
        bool feas = true;
        for (int i = 0; i < n; ++i)
          if (x(i) < lo(i) - tol || x(i) > hi(i) + tol) feas = false;
        if (m > 0 && (A * x - b).lpNorm<Eigen::Infinity>() > 1e-7) feas = false;
        if (feas) {
          std::vector<double> xv(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i) xv[static_cast<size_t>(i)] = x(i);
          best = std::min(best, objective(p, xv));
        }
      }
    }
    // next pattern
    int pos = 0;
    while (pos < n) {
      if (++pat[static_cast<size_t>(pos)] <= 2) break;
      pat[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

QpProblem random_psd_problem(std::mt19937_64& rng, bool allow_singular) {
  std::uniform_int_distribution<int> nd(1, 8), md(0, 3);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const int n = nd(rng);
  const int m = std::min(md(rng), n);
  QpProblem p;
  p.reset(n);
  const int rank = allow_singular ? std::max(1, n - 1) : n;
  Eigen::MatrixXd M(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = ud(rng);
  Eigen::MatrixXd H = M.transpose() * M;
  for (int i = 0; i < n; ++i) {
    p.diag[static_cast<size_t>(i)] = H(i, i);
    p.lin[static_cast<size_t>(i)] = ud(rng);
    p.lo[static_cast<size_t>(i)] = -1.5 + 0.5 * ud(rng);
    p.hi[static_cast<size_t>(i)] = 1.5 + 0.5 * ud(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (H(i, j) != 0.0) p.add_off(i, j, H(i, j));
  // a feasible interior-ish point defines consistent equality rows
  std::vector<double> x0(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    x0[static_cast<size_t>(i)] =
        0.5 * (p.lo[static_cast<size_t>(i)] + p.hi[static_cast<size_t>(i)]) +
        0.2 * ud(rng);
  for (int r = 0; r < m; ++r) {
    QpProblem::EqRow row;
    double rhs = 0.0;
    for (int i = 0; i < n; ++i) {
      if (ud(rng) < 0.0) continue;
      const double v = ud(rng);
      row.coef.push_back({i, v});
      rhs += v * x0[static_cast<size_t>(i)];
    }
    row.rhs = rhs;
    if (!row.coef.empty()) p.eq.push_back(row);
  }
  return p;
}

}  // namespace

TEST_CASE("unconstrained proximal point lands on the center") {
  QpProblem p;
  p.reset(3);
  const std::vector<double> c{0.3, -0.4, 0.9};
  for (int i = 0; i < 3; ++i) {
    p.diag[static_cast<size_t>(i)] = 2.0;
    p.lin[static_cast<size_t>(i)] = -2.0 * c[static_cast<size_t>(i)];
    p.lo[static_cast<size_t>(i)] = -1.0;
    p.hi[static_cast<size_t>(i)] = 1.0;
  }
  const QpSolution s = solve_qp(p);
  CHECK(s.status == QpStatus::Success);
  for (int i = 0; i < 3; ++i)
    CHECK(s.x[static_cast<size_t>(i)] == doctest::Approx(c[static_cast<size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("symmetric equality split") {
  QpProblem p;
  p.reset(2);
  p.diag = {2.0, 2.0};
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};
  p.eq.push_back({{{0, 1.0}, {1, 1.0}}, 1.0});
  const QpSolution s = solve_qp(p);
  CHECK(s.status == QpStatus::Success);
  CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.x[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.eq_residual <= 1e-8);
  CHECK(s.stat_residual <= 1e-6);
}

TEST_CASE("random psd instances match the enumeration oracle") {
  std::mt19937_64 rng(424242);
  int strict = 0, singular = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool sing = trial % 5 == 4;
    const QpProblem p = random_psd_problem(rng, sing);
    const QpSolution s = solve_qp(p, 1e-8);
    REQUIRE(s.status == QpStatus::Success);
    CHECK(s.eq_residual <= 1e-6);
    CHECK(s.stat_residual <= 1e-6);
    const double oracle = active_set_enumeration_oracle(p);
    REQUIRE(std::isfinite(oracle));
    CHECK(std::abs(objective(p, s.x) - oracle) <= 1e-5);
    (sing ? singular : strict)++;
    for (int i = 0; i < p.n; ++i) {
      CHECK(s.x[static_cast<size_t>(i)] >= p.lo[static_cast<size_t>(i)] - 1e-9);
      CHECK(s.x[static_cast<size_t>(i)] <= p.hi[static_cast<size_t>(i)] + 1e-9);
    }
  }
  CHECK(strict > 0);
  CHECK(singular > 0);
}

TEST_CASE("objective scaling keeps the minimizer") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const QpProblem p = random_psd_problem(rng, false);
    QpProblem ps = p;
    const double lam = 37.5;
    for (auto& v : ps.diag) v *= lam;
    for (auto& v : ps.lin) v *= lam;
    for (auto& o : ps.off) o.v *= lam;
    const QpSolution a = solve_qp(p, 1e-10);
    const QpSolution b = solve_qp(ps, 1e-10);
    for (int i = 0; i < p.n; ++i)
      CHECK(std::abs(a.x[static_cast<size_t>(i)] - b.x[static_cast<size_t>(i)]) <= 1e-7);
  }
}

TEST_CASE("warm and cold starts agree in objective") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const QpProblem p = random_psd_problem(rng, trial % 2 == 1);
    std::vector<double> warm(static_cast<size_t>(p.n), 0.25);
    const QpSolution a = solve_qp(p, 1e-8);
    const QpSolution b = solve_qp(p, 1e-8, &warm);
    CHECK(std::abs(objective(p, a.x) - objective(p, b.x)) <= 1e-7);
  }
}

TEST_CASE("irreconcilable equality and box reports infeasible") {
  QpProblem p;
  p.reset(2);
  p.diag = {1.0, 1.0};
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};
  p.eq.push_back({{{0, 1.0}, {1, 1.0}}, 5.0});
  const QpSolution s = solve_qp(p);
  CHECK(s.status == QpStatus::Infeasible);
}

TEST_CASE("infinite bounds are usable") {
  QpProblem p;
  p.reset(2);
  p.diag = {4.0, 1.0};
  p.lin = {-4.0, 3.0};
  const QpSolution s = solve_qp(p);
  CHECK(s.status == QpStatus::Success);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(-3.0));
}

TEST_CASE("flat directions settle deterministically") {
  // H = [[1,1],[1,1]] singular; objective 0.5 (x1+x2)^2 - (x1+x2)
  QpProblem p;
  p.reset(2);
  p.diag = {1.0, 1.0};
  p.add_off(0, 1, 1.0);
  p.lin = {-1.0, -1.0};
  p.lo = {0.0, 0.0};
  p.hi = {2.0, 2.0};
  const QpSolution a = solve_qp(p);
  const QpSolution b = solve_qp(p);
  CHECK(a.status == QpStatus::Success);
  CHECK(objective(p, a.x) == doctest::Approx(-0.5).epsilon(1e-7));
  CHECK(a.x == b.x);
}

TEST_CASE("degenerate consistent equality rows are accepted") {
  // duplicated row: rank deficient but consistent
  QpProblem p;
  p.reset(2);
  p.diag = {2.0, 2.0};
  p.lo = {-5.0, -5.0};
  p.hi = {5.0, 5.0};
  p.eq.push_back({{{0, 1.0}, {1, 1.0}}, 2.0});
  p.eq.push_back({{{0, 2.0}, {1, 2.0}}, 4.0});
  const QpSolution s = solve_qp(p);
  CHECK(s.status == QpStatus::Success);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.0));

  QpProblem q = p;
  q.eq[1].rhs = 7.0;  // now inconsistent
  CHECK(solve_qp(q).status == QpStatus::Infeasible);
}
