#include "pdnr/qp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdnr {

namespace {

constexpr double kEps = 1e-13;

// Component-local inequality rows a.x <= ub in CSR layout.
struct LocalIneqs {
  std::vector<int> ptr{0};
  std::vector<int> idx;
  std::vector<double> val;
  std::vector<double> ub;
  int rows() const { return static_cast<int>(ub.size()); }
  void clear() {
    ptr.assign(1, 0);
    idx.clear();
    val.clear();
    ub.clear();
  }
};

// Dual active-set method for strictly convex dense QP
//   min 1/2 x'Gx + g0'x  s.t.  CE'x = ce,  lo <= x <= hi,  a_k.x <= ub_k
// Bounds use specialized +-e_i normals; general rows use their (negated)
// coefficient vectors. Starts at the unconstrained minimum and adds violated
// constraints one at a time, maintaining a QR factorization of the active
// normals updated by Givens rotations (Goldfarb-Idnani). Workspace is
// grow-only; run() does not allocate once warmed up.
class DenseActiveSet {
 public:
  struct Result {
    bool feasible = true;
    bool not_pd = false;  // Cholesky failed; caller should regularize
    int iterations = 0;
  };

  void ensure_capacity(int n) {
    if (J_.rows() < n) {
      J_.resize(n, n);
      R_.resize(n, n);
      d_.resize(n);
      z_.resize(n);
      r_.resize(n);
      np_.resize(n);
      bstate_.assign(static_cast<size_t>(n), 0);
      active_.reserve(static_cast<size_t>(2 * n));
      u_.reserve(static_cast<size_t>(2 * n));
    }
  }

  // G is destroyed. Duals: eq_mult (length me), bound_mult (length n,
  // positive at a lower bound, negative at an upper bound), ineq_mult
  // (length gi.rows(), nonnegative).
  Result run(Eigen::Ref<Eigen::MatrixXd> G, const Eigen::Ref<const Eigen::VectorXd>& g0,
             const Eigen::Ref<const Eigen::MatrixXd>& CE,
             const Eigen::Ref<const Eigen::VectorXd>& ce,
             const Eigen::Ref<const Eigen::VectorXd>& lo,
             const Eigen::Ref<const Eigen::VectorXd>& hi, const LocalIneqs& gi,
             Eigen::Ref<Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> eq_mult,
             Eigen::Ref<Eigen::VectorXd> bound_mult,
             Eigen::Ref<Eigen::VectorXd> ineq_mult, double tol) {
    const int n = static_cast<int>(g0.size());
    const int me = static_cast<int>(ce.size());
    const int mg = gi.rows();
    ensure_capacity(n);
    gstate_.assign(static_cast<size_t>(mg), 0);
    Result res;
    eq_mult.setZero();
    bound_mult.setZero();
    ineq_mult.setZero();

    const double gscale = G.diagonal().maxCoeff();
    if (G.diagonal().minCoeff() <= 0.0) {
      res.not_pd = true;
      return res;
    }
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(G);
    if (llt.info() != Eigen::Success ||
        llt.matrixLLT().diagonal().minCoeff() <= std::sqrt(1e-12 * gscale)) {
      // near-singular pivots would poison J; let the caller regularize
      res.not_pd = true;
      return res;
    }

    auto J = J_.topLeftCorner(n, n);
    J.setIdentity();
    llt.matrixU().solveInPlace(J);  // J = L^-T
    active_.clear();
    u_.clear();
    std::fill(bstate_.begin(), bstate_.begin() + n, 0);
    iq_ = 0;
    R_norm_ = 1.0;

    x = llt.solve(-g0);

    auto d = d_.head(n);
    auto z = z_.head(n);
    auto np = np_.head(n);

    auto compute_dirs = [&]() {
      d.noalias() = J.transpose() * np;
      z.noalias() = J.rightCols(n - iq_) * d.tail(n - iq_);
      if (iq_ > 0) {
        r_.head(iq_) = d.head(iq_);
        R_.topLeftCorner(iq_, iq_)
            .triangularView<Eigen::Upper>()
            .solveInPlace(r_.head(iq_));
      }
    };
    auto row_value = [&](int row) {
      double s = 0.0;
      for (int k = gi.ptr[static_cast<size_t>(row)]; k < gi.ptr[static_cast<size_t>(row) + 1]; ++k)
        s += gi.val[static_cast<size_t>(k)] * x(gi.idx[static_cast<size_t>(k)]);
      return s;
    };

    // equality rows first; they are never dropped
    for (int j = 0; j < me; ++j) {
      np = CE.col(j);
      compute_dirs();
      const double resid = np.dot(x) - ce(j);
      const double znp = z.dot(np);
      if (znp <= kEps * R_norm_) {
        // dependent on rows already added: consistent -> skip
        if (std::abs(resid) > std::max(tol, 1e-9)) {
          res.feasible = false;
          return res;
        }
        continue;
      }
      const double t2 = -resid / znp;
      x += t2 * z;
      for (int k = 0; k < iq_; ++k) u_[static_cast<size_t>(k)] -= t2 * r_(k);
      if (!add_constraint(n)) {
        res.feasible = false;
        return res;
      }
      active_.push_back(-(j + 1));  // negative id marks an equality
      u_.push_back(t2);
      ++res.iterations;
    }

    const double act_tol = std::max(tol, 1e-11);
    const int max_iter = 50 * (n + me + mg) + 200;
    while (true) {
      if (res.iterations++ > max_iter) break;
      // most violated constraint, lowest id on ties
      int ip = -1;
      double worst = -act_tol;
      for (int i = 0; i < n; ++i) {
        if (bstate_[static_cast<size_t>(i)] != 0) continue;
        if (std::isfinite(lo(i))) {
          const double s = x(i) - lo(i);
          if (s < worst) {
            worst = s;
            ip = 2 * i;
          }
        }
        if (std::isfinite(hi(i))) {
          const double s = hi(i) - x(i);
          if (s < worst) {
            worst = s;
            ip = 2 * i + 1;
          }
        }
      }
      for (int row = 0; row < mg; ++row) {
        if (gstate_[static_cast<size_t>(row)]) continue;
        const double s = gi.ub[static_cast<size_t>(row)] - row_value(row);
        if (s < worst) {
          worst = s;
          ip = 2 * n + row;
        }
      }
      if (ip < 0) break;  // optimal

      double ci0;
      np.setZero();
      if (ip < 2 * n) {
        const int var = ip / 2;
        const bool lower = (ip % 2) == 0;
        np(var) = lower ? 1.0 : -1.0;
        ci0 = lower ? -lo(var) : hi(var);
      } else {
        const int row = ip - 2 * n;
        for (int k = gi.ptr[static_cast<size_t>(row)]; k < gi.ptr[static_cast<size_t>(row) + 1]; ++k)
          np(gi.idx[static_cast<size_t>(k)]) -= gi.val[static_cast<size_t>(k)];
        ci0 = gi.ub[static_cast<size_t>(row)];
      }
      double s_ip = np.dot(x) + ci0;
      double u_ip = 0.0;

      while (true) {
        if (res.iterations++ > max_iter) {
          write_duals(n, eq_mult, bound_mult, ineq_mult);
          return res;
        }
        compute_dirs();
        double t1 = kInf;
        int l = -1;
        for (int k = 0; k < iq_; ++k) {
          if (active_[static_cast<size_t>(k)] < 0) continue;
          if (r_(k) > kEps * R_norm_) {
            const double ratio = u_[static_cast<size_t>(k)] / r_(k);
            if (ratio < t1) {
              t1 = ratio;
              l = k;
            }
          }
        }
        const double znp = z.dot(np);
        const double t2 = (znp > kEps * R_norm_) ? -s_ip / znp : kInf;
        const double t = std::min(t1, t2);
        if (!std::isfinite(t)) {
          res.feasible = false;
          write_duals(n, eq_mult, bound_mult, ineq_mult);
          return res;
        }
        if (!std::isfinite(t2)) {
          for (int k = 0; k < iq_; ++k) u_[static_cast<size_t>(k)] -= t * r_(k);
          u_ip += t;
          drop_constraint(n, l);
          continue;
        }
        x += t * z;
        for (int k = 0; k < iq_; ++k) u_[static_cast<size_t>(k)] -= t * r_(k);
        u_ip += t;
        if (t == t2) {
          if (!add_constraint(n)) {
            res.feasible = false;
            write_duals(n, eq_mult, bound_mult, ineq_mult);
            return res;
          }
          active_.push_back(ip);
          u_.push_back(u_ip);
          if (ip < 2 * n)
            bstate_[static_cast<size_t>(ip / 2)] = (ip % 2 == 0) ? 1 : -1;
          else
            gstate_[static_cast<size_t>(ip - 2 * n)] = 1;
          break;
        }
        drop_constraint(n, l);
        s_ip = np.dot(x) + ci0;
      }
    }

    write_duals(n, eq_mult, bound_mult, ineq_mult);
    return res;
  }

 private:
  void write_duals(int n, Eigen::Ref<Eigen::VectorXd> eq_mult,
                   Eigen::Ref<Eigen::VectorXd> bound_mult,
                   Eigen::Ref<Eigen::VectorXd> ineq_mult) {
    for (size_t k = 0; k < active_.size(); ++k) {
      const int id = active_[k];
      const double uk = u_[k];
      if (id < 0)
        eq_mult(-id - 1) = uk;
      else if (id < 2 * n)
        bound_mult(id / 2) = (id % 2 == 0) ? uk : -uk;
      else
        ineq_mult(id - 2 * n) = uk;
    }
  }

  bool add_constraint(int n) {
    for (int j = n - 1; j > iq_; --j) {
      double cc = d_(j - 1);
      double ss = d_(j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      cc /= h;
      ss /= h;
      d_(j) = 0.0;
      if (cc < 0.0) {
        d_(j - 1) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        d_(j - 1) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = 0; k < n; ++k) {
        const double t1v = J_(k, j - 1);
        const double t2v = J_(k, j);
        J_(k, j - 1) = t1v * cc + t2v * ss;
        J_(k, j) = xny * (t1v + J_(k, j - 1)) - t2v;
      }
    }
    if (std::abs(d_(iq_)) <= kEps * R_norm_) return false;
    R_.col(iq_).head(iq_ + 1) = d_.head(iq_ + 1);
    ++iq_;
    R_norm_ = std::max(R_norm_, std::abs(d_(iq_ - 1)));
    return true;
  }

  void drop_constraint(int n, int l) {
    {
      const int id = active_[static_cast<size_t>(l)];
      if (id >= 0 && id < 2 * n)
        bstate_[static_cast<size_t>(id / 2)] = 0;
      else if (id >= 2 * n)
        gstate_[static_cast<size_t>(id - 2 * n)] = 0;
    }
    for (int i = l; i < iq_ - 1; ++i) {
      active_[static_cast<size_t>(i)] = active_[static_cast<size_t>(i + 1)];
      u_[static_cast<size_t>(i)] = u_[static_cast<size_t>(i + 1)];
      R_.col(i).head(iq_) = R_.col(i + 1).head(iq_);
    }
    active_.pop_back();
    u_.pop_back();
    --iq_;
    for (int j = l; j < iq_; ++j) {
      double cc = R_(j, j);
      double ss = R_(j + 1, j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      cc /= h;
      ss /= h;
      R_(j + 1, j) = 0.0;
      if (cc < 0.0) {
        R_(j, j) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        R_(j, j) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = j + 1; k < iq_; ++k) {
        const double t1v = R_(j, k);
        const double t2v = R_(j + 1, k);
        R_(j, k) = t1v * cc + t2v * ss;
        R_(j + 1, k) = xny * (t1v + R_(j, k)) - t2v;
      }
      for (int k = 0; k < n; ++k) {
        const double t1v = J_(k, j);
        const double t2v = J_(k, j + 1);
        J_(k, j) = t1v * cc + t2v * ss;
        J_(k, j + 1) = xny * (J_(k, j) + t1v) - t2v;
      }
    }
  }

  Eigen::MatrixXd J_, R_;
  Eigen::VectorXd d_, z_, r_, np_;
  std::vector<int> active_;
  std::vector<double> u_;
  std::vector<signed char> bstate_;
  std::vector<signed char> gstate_;
  int iq_ = 0;
  double R_norm_ = 1.0;
};

}  // namespace

struct QpSolver::Impl {
  DenseActiveSet core;
  std::vector<int> uf;
  std::vector<int> var_comp;
  std::vector<std::vector<int>> comp_vars;
  std::vector<std::vector<int>> comp_eqs;
  std::vector<std::vector<int>> comp_offs;
  std::vector<std::vector<int>> comp_ineqs;
  std::vector<int> local_index;
  LocalIneqs gi;
  Eigen::MatrixXd G, Gwork, CE;
  Eigen::VectorXd g0, ce, loc_lo, loc_hi, xloc, nu_loc, bm_loc, gm_loc, center, gshift;
  std::vector<double> eq_mult, bound_mult, ineq_mult;

  int find(int a) {
    while (uf[static_cast<size_t>(a)] != a) {
      uf[static_cast<size_t>(a)] = uf[static_cast<size_t>(uf[static_cast<size_t>(a)])];
      a = uf[static_cast<size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) uf[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
  void ensure(int n, int me, int mg) {
    if (G.rows() < n) {
      G.resize(n, n);
      Gwork.resize(n, n);
      g0.resize(n);
      loc_lo.resize(n);
      loc_hi.resize(n);
      xloc.resize(n);
      bm_loc.resize(n);
      center.resize(n);
      gshift.resize(n);
    }
    const long wantc = std::max<long>({CE.cols(), me, 1});
    if (CE.rows() < G.rows() || CE.cols() < wantc) {
      CE.resize(G.rows(), wantc);
      ce.resize(wantc);
      nu_loc.resize(wantc);
    }
    if (gm_loc.size() < std::max(mg, 1)) gm_loc.resize(std::max(mg, 1));
  }
};

QpSolver::QpSolver() : impl_(std::make_unique<Impl>()) {}
QpSolver::~QpSolver() = default;
QpSolver::QpSolver(QpSolver&&) noexcept = default;
QpSolver& QpSolver::operator=(QpSolver&&) noexcept = default;

QpSolution QpSolver::solve(const QpProblem& p, double tol,
                           const std::vector<double>* warm_start) {
  Impl& im = *impl_;
  const int n = p.n;
  if (static_cast<int>(p.diag.size()) != n || static_cast<int>(p.lin.size()) != n ||
      static_cast<int>(p.lo.size()) != n || static_cast<int>(p.hi.size()) != n)
    throw std::invalid_argument("qp problem field sizes inconsistent");
  for (int i = 0; i < n; ++i)
    if (p.lo[static_cast<size_t>(i)] > p.hi[static_cast<size_t>(i)])
      throw std::invalid_argument("qp bounds violate lo <= hi");
  if (warm_start && static_cast<int>(warm_start->size()) != n)
    throw std::invalid_argument("warm start length mismatch");

  QpSolution sol;
  sol.x.assign(static_cast<size_t>(n), 0.0);

  im.uf.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) im.uf[static_cast<size_t>(i)] = i;
  for (const auto& o : p.off)
    if (o.i != o.j) im.unite(o.i, o.j);
  for (const auto& row : p.eq)
    for (size_t k = 1; k < row.coef.size(); ++k)
      im.unite(row.coef[0].first, row.coef[k].first);
  for (const auto& row : p.ineq)
    for (size_t k = 1; k < row.coef.size(); ++k)
      im.unite(row.coef[0].first, row.coef[k].first);

  im.var_comp.assign(static_cast<size_t>(n), -1);
  int comp_count = 0;
  for (int i = 0; i < n; ++i) {
    const int root = im.find(i);
    if (im.var_comp[static_cast<size_t>(root)] < 0)
      im.var_comp[static_cast<size_t>(root)] = comp_count++;
    im.var_comp[static_cast<size_t>(i)] = im.var_comp[static_cast<size_t>(root)];
  }
  auto grow = [](std::vector<std::vector<int>>& v, int m) {
    if (static_cast<int>(v.size()) < m) v.resize(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) v[static_cast<size_t>(k)].clear();
  };
  grow(im.comp_vars, comp_count);
  grow(im.comp_eqs, comp_count);
  grow(im.comp_offs, comp_count);
  grow(im.comp_ineqs, comp_count);
  for (int i = 0; i < n; ++i)
    im.comp_vars[static_cast<size_t>(im.var_comp[static_cast<size_t>(i)])].push_back(i);
  for (size_t rj = 0; rj < p.eq.size(); ++rj) {
    if (p.eq[rj].coef.empty()) {
      if (std::abs(p.eq[rj].rhs) > tol) sol.status = QpStatus::Infeasible;
      continue;
    }
    const int c = im.var_comp[static_cast<size_t>(p.eq[rj].coef[0].first)];
    im.comp_eqs[static_cast<size_t>(c)].push_back(static_cast<int>(rj));
  }
  for (size_t rj = 0; rj < p.ineq.size(); ++rj) {
    if (p.ineq[rj].coef.empty()) {
      if (p.ineq[rj].ub < -tol) sol.status = QpStatus::Infeasible;
      continue;
    }
    const int c = im.var_comp[static_cast<size_t>(p.ineq[rj].coef[0].first)];
    im.comp_ineqs[static_cast<size_t>(c)].push_back(static_cast<int>(rj));
  }
  for (size_t oi = 0; oi < p.off.size(); ++oi) {
    const int c = im.var_comp[static_cast<size_t>(p.off[oi].i)];
    im.comp_offs[static_cast<size_t>(c)].push_back(static_cast<int>(oi));
  }

  im.local_index.assign(static_cast<size_t>(n), -1);
  im.eq_mult.assign(p.eq.size(), 0.0);
  im.bound_mult.assign(static_cast<size_t>(n), 0.0);
  im.ineq_mult.assign(p.ineq.size(), 0.0);

  for (int c = 0; c < comp_count; ++c) {
    const auto& vars = im.comp_vars[static_cast<size_t>(c)];
    const auto& eqs = im.comp_eqs[static_cast<size_t>(c)];
    const auto& ineqs = im.comp_ineqs[static_cast<size_t>(c)];
    const int nc = static_cast<int>(vars.size());
    const int mc = static_cast<int>(eqs.size());
    const int gc = static_cast<int>(ineqs.size());

    if (nc == 1 && mc == 0 && gc == 0) {
      // scalar box QP, closed form
      const int i = vars[0];
      const double h = p.diag[static_cast<size_t>(i)];
      const double cc = p.lin[static_cast<size_t>(i)];
      const double lo = p.lo[static_cast<size_t>(i)];
      const double hi = p.hi[static_cast<size_t>(i)];
      double xs;
      if (h > 0.0)
        xs = -cc / h;
      else if (cc > 0.0)
        xs = lo;
      else if (cc < 0.0)
        xs = hi;
      else
        xs = std::min(std::max(0.0, lo), hi);
      xs = std::min(std::max(xs, lo), hi);
      if (!std::isfinite(xs))
        throw std::invalid_argument("unbounded quadratic subproblem");
      sol.x[static_cast<size_t>(i)] = xs;
      const double grad = h * xs + cc;
      if ((xs == lo && grad >= 0.0) || (xs == hi && grad <= 0.0))
        im.bound_mult[static_cast<size_t>(i)] = grad;
      continue;
    }

    im.ensure(nc, mc, gc);
    for (int k = 0; k < nc; ++k)
      im.local_index[static_cast<size_t>(vars[static_cast<size_t>(k)])] = k;

    auto G = im.G.topLeftCorner(nc, nc);
    G.setZero();
    for (int k = 0; k < nc; ++k) {
      const int gidx = vars[static_cast<size_t>(k)];
      G(k, k) = p.diag[static_cast<size_t>(gidx)];
      im.g0(k) = p.lin[static_cast<size_t>(gidx)];
      im.loc_lo(k) = p.lo[static_cast<size_t>(gidx)];
      im.loc_hi(k) = p.hi[static_cast<size_t>(gidx)];
    }
    for (int oi : im.comp_offs[static_cast<size_t>(c)]) {
      const auto& o = p.off[static_cast<size_t>(oi)];
      if (o.i == o.j) {
        const int a = im.local_index[static_cast<size_t>(o.i)];
        G(a, a) += 2.0 * o.v;
        continue;
      }
      const int a = im.local_index[static_cast<size_t>(o.i)];
      const int b = im.local_index[static_cast<size_t>(o.j)];
      G(a, b) += o.v;
      G(b, a) += o.v;
    }
    auto CE = im.CE.topLeftCorner(nc, std::max(mc, 1)).leftCols(mc);
    CE.setZero();
    for (int jr = 0; jr < mc; ++jr) {
      const auto& row = p.eq[static_cast<size_t>(eqs[static_cast<size_t>(jr)])];
      im.ce(jr) = row.rhs;
      for (const auto& [gidx, v] : row.coef)
        CE(im.local_index[static_cast<size_t>(gidx)], jr) += v;
    }
    im.gi.clear();
    for (int jr = 0; jr < gc; ++jr) {
      const auto& row = p.ineq[static_cast<size_t>(ineqs[static_cast<size_t>(jr)])];
      for (const auto& [gidx, v] : row.coef) {
        im.gi.idx.push_back(im.local_index[static_cast<size_t>(gidx)]);
        im.gi.val.push_back(v);
      }
      im.gi.ptr.push_back(static_cast<int>(im.gi.idx.size()));
      im.gi.ub.push_back(row.ub);
    }

    auto xv = im.xloc.head(nc);
    auto nu = im.nu_loc.head(std::max(mc, 1)).head(mc);
    auto bm = im.bm_loc.head(nc);
    auto gm = im.gm_loc.head(std::max(gc, 1)).head(gc);

    // strictly convex path first; proximal regularization when the core
    // reports a failed factorization
    auto Gwork = im.Gwork.topLeftCorner(nc, nc);
    Gwork = G;
    DenseActiveSet::Result r =
        im.core.run(Gwork, im.g0.head(nc), CE, im.ce.head(mc), im.loc_lo.head(nc),
                    im.loc_hi.head(nc), im.gi, xv, nu, bm, gm, tol);
    sol.iterations += r.iterations;
    if (r.not_pd) {
      const double mu = 1e-8 * (G.diagonal().maxCoeff() + 1.0);
      auto center = im.center.head(nc);
      center.setZero();
      if (warm_start)
        for (int k = 0; k < nc; ++k)
          center(k) = (*warm_start)[static_cast<size_t>(vars[static_cast<size_t>(k)])];
      for (int k = 0; k < nc; ++k) {
        if (!std::isfinite(center(k))) center(k) = 0.0;
        center(k) = std::min(std::max(center(k), im.loc_lo(k)), im.loc_hi(k));
        if (!std::isfinite(center(k))) center(k) = 0.0;
      }
      r.feasible = true;
      const int max_prox = 500;
      int it = 0;
      for (; it < max_prox; ++it) {
        Gwork = G;
        Gwork.diagonal().array() += mu;
        im.gshift.head(nc) = im.g0.head(nc) - mu * center;
        r = im.core.run(Gwork, im.gshift.head(nc), CE, im.ce.head(mc),
                        im.loc_lo.head(nc), im.loc_hi.head(nc), im.gi, xv, nu, bm,
                        gm, tol);
        sol.iterations += r.iterations;
        if (!r.feasible || r.not_pd) break;
        const double delta = (xv - center).lpNorm<Eigen::Infinity>();
        center = xv;
        if (mu * delta <= 0.01 * tol) break;
      }
      if (r.not_pd)
        throw std::runtime_error("quadratic term is not positive semidefinite");
      if (it == max_prox && sol.status == QpStatus::Success)
        sol.status = QpStatus::MaxIterations;
    }
    if (!r.feasible) sol.status = QpStatus::Infeasible;

    for (int k = 0; k < nc; ++k) {
      const double xk = std::min(std::max(xv(k), im.loc_lo(k)), im.loc_hi(k));
      sol.x[static_cast<size_t>(vars[static_cast<size_t>(k)])] = xk;
    }
    for (int jr = 0; jr < mc; ++jr)
      im.eq_mult[static_cast<size_t>(eqs[static_cast<size_t>(jr)])] = nu(jr);
    for (int jr = 0; jr < gc; ++jr)
      im.ineq_mult[static_cast<size_t>(ineqs[static_cast<size_t>(jr)])] = gm(jr);
    for (int k = 0; k < nc; ++k)
      im.bound_mult[static_cast<size_t>(vars[static_cast<size_t>(k)])] = bm(k);
  }

  // constraint residual report
  for (size_t rj = 0; rj < p.eq.size(); ++rj) {
    double v = -p.eq[rj].rhs;
    for (const auto& [gidx, cv] : p.eq[rj].coef) v += cv * sol.x[static_cast<size_t>(gidx)];
    sol.eq_residual = std::max(sol.eq_residual, std::abs(v));
  }
  for (size_t rj = 0; rj < p.ineq.size(); ++rj) {
    double v = -p.ineq[rj].ub;
    for (const auto& [gidx, cv] : p.ineq[rj].coef) v += cv * sol.x[static_cast<size_t>(gidx)];
    sol.eq_residual = std::max(sol.eq_residual, std::max(0.0, v));
  }
  // KKT stationarity report
  {
    std::vector<double> grad(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      grad[static_cast<size_t>(i)] =
          p.diag[static_cast<size_t>(i)] * sol.x[static_cast<size_t>(i)] +
          p.lin[static_cast<size_t>(i)];
    for (const auto& o : p.off) {
      if (o.i == o.j) {
        grad[static_cast<size_t>(o.i)] += 2.0 * o.v * sol.x[static_cast<size_t>(o.i)];
        continue;
      }
      grad[static_cast<size_t>(o.i)] += o.v * sol.x[static_cast<size_t>(o.j)];
      grad[static_cast<size_t>(o.j)] += o.v * sol.x[static_cast<size_t>(o.i)];
    }
    for (size_t rj = 0; rj < p.eq.size(); ++rj)
      for (const auto& [gidx, cv] : p.eq[rj].coef)
        grad[static_cast<size_t>(gidx)] -= cv * im.eq_mult[rj];
    for (size_t rj = 0; rj < p.ineq.size(); ++rj)
      for (const auto& [gidx, cv] : p.ineq[rj].coef)
        grad[static_cast<size_t>(gidx)] += cv * im.ineq_mult[rj];
    for (int i = 0; i < n; ++i) grad[static_cast<size_t>(i)] -= im.bound_mult[static_cast<size_t>(i)];
    for (int i = 0; i < n; ++i)
      sol.stat_residual = std::max(sol.stat_residual, std::abs(grad[static_cast<size_t>(i)]));
  }
  if (sol.status == QpStatus::Success && sol.eq_residual > std::max(tol, 1e-9))
    sol.status = QpStatus::Infeasible;
  return sol;
}

QpSolution solve_qp(const QpProblem& p, double tol,
                    const std::vector<double>* warm_start) {
  QpSolver solver;
  return solver.solve(p, tol, warm_start);
}

}  // namespace pdnr
