#pragma once

#include <limits>
#include <memory>
#include <vector>

namespace pdnr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Convex quadratic program
///   min 1/2 x'Hx + c'x   s.t.  lo <= x <= hi,  A x = rhs,  B x <= ub
/// with H symmetric positive semidefinite, assembled from sums of squares.
/// diag[i] holds H_ii; add_off(i, j, v) adds the objective term v*x_i*x_j
/// (duplicates accumulate). Equality and inequality rows are sparse; the
/// inequality rows exist for capacity-coupling style constraints and may be
/// empty.
struct QpProblem {
  int n = 0;
  std::vector<double> diag;
  struct Off {
    int i;
    int j;
    double v;
  };
  std::vector<Off> off;
  std::vector<double> lin;
  std::vector<double> lo;
  std::vector<double> hi;
  struct EqRow {
    std::vector<std::pair<int, double>> coef;
    double rhs = 0.0;
  };
  std::vector<EqRow> eq;
  struct IneqRow {
    std::vector<std::pair<int, double>> coef;
    double ub = 0.0;  // coef . x <= ub
  };
  std::vector<IneqRow> ineq;

  void reset(int dim) {
    n = dim;
    diag.assign(static_cast<size_t>(dim), 0.0);
    lin.assign(static_cast<size_t>(dim), 0.0);
    lo.assign(static_cast<size_t>(dim), -kInf);
    hi.assign(static_cast<size_t>(dim), kInf);
    off.clear();
    eq.clear();
    ineq.clear();
  }
  void add_off(int i, int j, double v) {
    if (i == j) {
      diag[static_cast<size_t>(i)] += 2.0 * v;  // x_i*x_j term with i==j
      return;
    }
    off.push_back({i < j ? i : j, i < j ? j : i, v});
  }
};

enum class QpStatus { Success, MaxIterations, Infeasible };

struct QpSolution {
  std::vector<double> x;
  double eq_residual = 0.0;    // max |a'x - rhs|
  double stat_residual = 0.0;  // max-norm KKT stationarity residual
  int iterations = 0;
  QpStatus status = QpStatus::Success;
};

/// Re-entrant solver with reusable workspace; keep one instance per logical
/// agent. Deterministic: identical inputs give identical outputs.
/// `warm_start` seeds the proximal center used for semidefinite problems and
/// is otherwise only a hint; warm and cold solves agree in objective.
class QpSolver {
 public:
  QpSolver();
  ~QpSolver();
  QpSolver(QpSolver&&) noexcept;
  QpSolver& operator=(QpSolver&&) noexcept;

  QpSolution solve(const QpProblem& p, double tol = 1e-8,
                   const std::vector<double>* warm_start = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Stateless convenience wrapper.
QpSolution solve_qp(const QpProblem& p, double tol = 1e-8,
                    const std::vector<double>* warm_start = nullptr);

}  // namespace pdnr
