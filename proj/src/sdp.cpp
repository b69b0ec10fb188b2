#include "sqpm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sqpm::sdp {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::PrimalInfeasible: return "PrimalInfeasible";
    case Status::DualInfeasible: return "DualInfeasible";
    case Status::MaxIterations: return "MaxIterations";
    case Status::NumericalError: return "NumericalError";
  }
  return "Unknown";
}

void SdpProblem::validate() const {
  if (block_sizes.empty()) throw InvalidArgument("SdpProblem: no blocks");
  for (int n : block_sizes) {
    if (n < 1) throw InvalidArgument("SdpProblem: block sizes must be >= 1");
  }
  if (!objective.empty() && objective.size() != block_sizes.size()) {
    throw InvalidArgument("SdpProblem: objective must have one matrix per block");
  }
  for (std::size_t k = 0; k < objective.size(); ++k) {
    const RMat& c = objective[k];
    if (c.size() == 0) continue;
    if (c.rows() != block_sizes[k] || c.cols() != block_sizes[k]) {
      throw InvalidArgument("SdpProblem: objective block " + std::to_string(k) + " has wrong size");
    }
  }
  if (constraints.empty()) throw InvalidArgument("SdpProblem: at least one constraint required");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (const auto& t : constraints[i].terms) {
      if (t.block < 0 || t.block >= num_blocks()) {
        throw InvalidArgument("SdpProblem: constraint " + std::to_string(i) + " references unknown block");
      }
      const int n = block_sizes[static_cast<std::size_t>(t.block)];
      if (t.matrix.rows() != n || t.matrix.cols() != n) {
        throw InvalidArgument("SdpProblem: constraint " + std::to_string(i) + " has a wrongly sized block");
      }
    }
  }
}

namespace {

RMat sym(const RMat& a) { return (a + a.transpose()) / 2; }

Scalar frob2(const std::vector<RMat>& blocks) {
  Scalar s = 0;
  for (const auto& b : blocks) s += b.squaredNorm();
  return s;
}

// Largest alpha with X + alpha*dX >= 0 (infinity if unbounded).
Scalar max_step(const RMat& x, const RMat& dx) {
  if (x.rows() == 1) {
    const Scalar d = dx(0, 0);
    return d < 0 ? -x(0, 0) / d : std::numeric_limits<Scalar>::infinity();
  }
  Eigen::LLT<RMat> llt(x);
  if (llt.info() != Eigen::Success) return 0;
  const RMat l_inv = llt.matrixL().solve(RMat::Identity(x.rows(), x.cols()));
  const RMat w = sym(l_inv * dx * l_inv.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(w, Eigen::EigenvaluesOnly);
  const Scalar lmin = es.eigenvalues()(0);
  return lmin < 0 ? -1 / lmin : std::numeric_limits<Scalar>::infinity();
}

struct Term {
  int row;
  const RMat* a;
};

// Row-scaled, dependency-free working copy of the problem.
struct Working {
  std::vector<int> sizes;
  std::vector<RMat> c;
  std::vector<std::vector<Term>> by_block;
  std::vector<std::vector<std::pair<int, RMat>>> rows;  // per kept row: (block, matrix)
  RVec b;
  RVec scale;             // kept row i = scale_i * original row
  std::vector<int> kept;  // original indices
  std::vector<int> dropped;
  int n_total = 0;
};

RVec svec_row(const SdpProblem& p, const Constraint& con, const std::vector<Eigen::Index>& offsets,
              Eigen::Index len) {
  RVec v = RVec::Zero(len);
  const Scalar r2 = std::sqrt(Scalar(2));
  for (const auto& t : con.terms) {
    const int n = p.block_sizes[static_cast<std::size_t>(t.block)];
    Eigen::Index pos = offsets[static_cast<std::size_t>(t.block)];
    const RMat a = sym(t.matrix);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) v(pos++) += (i == j) ? a(i, j) : r2 * a(i, j);
    }
  }
  return v;
}

struct PresolveOutcome {
  bool infeasible = false;
  RVec certificate;  // in original row indexing
};

PresolveOutcome presolve(const SdpProblem& p, Working& w) {
  const int m = p.num_constraints();
  w.sizes = p.block_sizes;
  std::vector<Eigen::Index> offsets(w.sizes.size());
  Eigen::Index len = 0;
  for (std::size_t k = 0; k < w.sizes.size(); ++k) {
    offsets[k] = len;
    len += static_cast<Eigen::Index>(w.sizes[k]) * (w.sizes[k] + 1) / 2;
  }
  RMat a(m, len);
  RVec b(m);
  RVec norms(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = svec_row(p, p.constraints[static_cast<std::size_t>(i)], offsets, len).transpose();
    b(i) = p.constraints[static_cast<std::size_t>(i)].rhs;
    norms(i) = a.row(i).norm();
  }
  PresolveOutcome out;
  RMat an = a;
  RVec bn = b;
  for (int i = 0; i < m; ++i) {
    if (norms(i) > 0) {
      an.row(i) /= norms(i);
      bn(i) /= norms(i);
    }
  }
  Eigen::ColPivHouseholderQR<RMat> qr(an.transpose());
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  std::vector<int> kept;
  for (Eigen::Index i = 0; i < rank; ++i) kept.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
  std::sort(kept.begin(), kept.end());
  std::vector<bool> is_kept(static_cast<std::size_t>(m), false);
  for (int i : kept) is_kept[static_cast<std::size_t>(i)] = true;
  for (int i = 0; i < m; ++i) {
    if (!is_kept[static_cast<std::size_t>(i)]) w.dropped.push_back(i);
  }

  if (!w.dropped.empty()) {
    RMat ak(len, static_cast<Eigen::Index>(kept.size()));
    RVec bk(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
      ak.col(static_cast<Eigen::Index>(j)) = an.row(kept[j]).transpose();
      bk(static_cast<Eigen::Index>(j)) = bn(kept[j]);
    }
    Eigen::ColPivHouseholderQR<RMat> qk(ak);
    for (int i : w.dropped) {
      RVec coef = kept.empty() ? RVec() : RVec(qk.solve(an.row(i).transpose()));
      const Scalar implied = kept.empty() ? 0 : coef.dot(bk);
      const Scalar mismatch = bn(i) - implied;
      if (std::abs(mismatch) > 1e-9 * (1 + std::abs(bn(i)) + std::abs(implied))) {
        // Farkas ray: y = (e_i - sum_j coef_j e_kept_j) / mismatch in normalized rows.
        out.infeasible = true;
        out.certificate = RVec::Zero(m);
        const Scalar ni = norms(i) > 0 ? norms(i) : 1;
        out.certificate(i) = 1 / (mismatch * ni);
        for (std::size_t j = 0; j < kept.size(); ++j) {
          out.certificate(kept[j]) = -coef(static_cast<Eigen::Index>(j)) / (mismatch * norms(kept[j]));
        }
        return out;
      }
    }
  }

  w.kept = kept;
  w.b.resize(static_cast<Eigen::Index>(kept.size()));
  w.scale.resize(static_cast<Eigen::Index>(kept.size()));
  w.by_block.assign(w.sizes.size(), {});
  w.rows.resize(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& con = p.constraints[static_cast<std::size_t>(kept[r])];
    const Scalar s = 1 / norms(kept[r]);
    w.scale(static_cast<Eigen::Index>(r)) = s;
    w.b(static_cast<Eigen::Index>(r)) = s * con.rhs;
    // merge duplicate block terms
    std::vector<std::pair<int, RMat>> merged;
    for (const auto& t : con.terms) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return e.first == t.block; });
      if (it == merged.end()) {
        merged.emplace_back(t.block, s * sym(t.matrix));
      } else {
        it->second += s * sym(t.matrix);
      }
    }
    w.rows[r] = std::move(merged);
  }
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    for (const auto& [blk, mat] : w.rows[r]) {
      w.by_block[static_cast<std::size_t>(blk)].push_back({static_cast<int>(r), &mat});
    }
  }
  w.c.resize(w.sizes.size());
  for (std::size_t k = 0; k < w.sizes.size(); ++k) {
    if (k < p.objective.size() && p.objective[k].size() != 0) {
      w.c[k] = sym(p.objective[k]);
    } else {
      w.c[k] = RMat::Zero(w.sizes[k], w.sizes[k]);
    }
  }
  w.n_total = std::accumulate(w.sizes.begin(), w.sizes.end(), 0);
  return out;
}

struct Iterate {
  std::vector<RMat> x, z;
  RVec y;
};

class Ipm {
 public:
  Ipm(const Working& w, const SolveOptions& opt) : w_(w), opt_(opt) {}

  SdpSolution run();

 private:
  RVec apply_a(const std::vector<RMat>& x) const {
    RVec out = RVec::Zero(w_.b.size());
    for (std::size_t r = 0; r < w_.rows.size(); ++r) {
      for (const auto& [blk, mat] : w_.rows[r]) out(static_cast<Eigen::Index>(r)) += inner(mat, x[static_cast<std::size_t>(blk)]);
    }
    return out;
  }

  std::vector<RMat> apply_at(const RVec& y) const {
    std::vector<RMat> out(w_.sizes.size());
    for (std::size_t k = 0; k < w_.sizes.size(); ++k) out[k] = RMat::Zero(w_.sizes[k], w_.sizes[k]);
    for (std::size_t r = 0; r < w_.rows.size(); ++r) {
      for (const auto& [blk, mat] : w_.rows[r]) out[static_cast<std::size_t>(blk)] += y(static_cast<Eigen::Index>(r)) * mat;
    }
    return out;
  }

  void initial_point(Iterate& it) const;
  bool schur(const Iterate& it, const std::vector<RMat>& zinv, RMat& m) const;

  const Working& w_;
  const SolveOptions& opt_;
};

void Ipm::initial_point(Iterate& it) const {
  const std::size_t nb = w_.sizes.size();
  it.x.resize(nb);
  it.z.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const Scalar n = w_.sizes[k];
    Scalar xi = std::max<Scalar>(10, std::sqrt(n));
    Scalar zeta = std::max<Scalar>(xi, w_.c[k].norm());
    for (const auto& t : w_.by_block[k]) {
      const Scalar an = t.a->norm();
      xi = std::max(xi, n * (1 + std::abs(w_.b(t.row))) / (1 + an));
      zeta = std::max(zeta, an);
    }
    it.x[k] = xi * RMat::Identity(w_.sizes[k], w_.sizes[k]);
    it.z[k] = zeta * RMat::Identity(w_.sizes[k], w_.sizes[k]);
  }
  it.y = RVec::Zero(w_.b.size());
}

bool Ipm::schur(const Iterate& it, const std::vector<RMat>& zinv, RMat& m) const {
  const Eigen::Index nr = w_.b.size();
  m = RMat::Zero(nr, nr);
  for (std::size_t k = 0; k < w_.sizes.size(); ++k) {
    const auto& terms = w_.by_block[k];
    if (terms.empty()) continue;
    if (w_.sizes[k] == 1) {
      const Scalar f = it.x[k](0, 0) * zinv[k](0, 0);
      for (const auto& ti : terms) {
        for (const auto& tj : terms) m(ti.row, tj.row) += f * (*ti.a)(0, 0) * (*tj.a)(0, 0);
      }
      continue;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const RMat g = it.x[k] * (*terms[i].a) * zinv[k];
      for (std::size_t j = i; j < terms.size(); ++j) {
        const Scalar v = inner(*terms[j].a, g);
        m(terms[i].row, terms[j].row) += v;
        if (j != i) m(terms[j].row, terms[i].row) += v;
      }
    }
  }
  return m.allFinite();
}

SdpSolution Ipm::run() {
  SdpSolution sol;
  const std::size_t nb = w_.sizes.size();
  const Scalar n = w_.n_total;
  const Scalar bnorm = [&] {
    RVec borig(w_.b.size());
    for (Eigen::Index i = 0; i < w_.b.size(); ++i) borig(i) = w_.b(i) / w_.scale(i);
    return borig.norm();
  }();
  const Scalar cnorm = std::sqrt(frob2(w_.c));

  Iterate it;
  initial_point(it);
  int stalls = 0;
  sol.status = Status::MaxIterations;

  for (int iter = 0; iter <= opt_.max_iter; ++iter) {
    sol.iterations = iter;
    const RVec ax = apply_a(it.x);
    const RVec rp = w_.b - ax;
    const std::vector<RMat> aty = apply_at(it.y);
    std::vector<RMat> rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = w_.c[k] - it.z[k] - aty[k];

    Scalar pobj = 0, xz = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      pobj += inner(w_.c[k], it.x[k]);
      xz += inner(it.x[k], it.z[k]);
    }
    const Scalar dobj = w_.b.dot(it.y);
    const Scalar mu = xz / n;

    RVec rp_orig(rp.size());
    for (Eigen::Index i = 0; i < rp.size(); ++i) rp_orig(i) = rp(i) / w_.scale(i);
    const Scalar pres = rp_orig.norm() / (1 + bnorm);
    const Scalar dres = std::sqrt(frob2(rd)) / (1 + cnorm);
    const Scalar gap = xz;
    const Scalar relgap = gap / (1 + std::abs(pobj) + std::abs(dobj));

    if (relgap <= opt_.tol_gap && pres <= opt_.tol_feas && dres <= opt_.tol_feas) {
      sol.status = Status::Optimal;
      break;
    }

    // Infeasibility certificates.
    if (dobj > 0) {
      std::vector<RMat> ray(nb);
      for (std::size_t k = 0; k < nb; ++k) ray[k] = aty[k] + it.z[k];
      if (std::sqrt(frob2(ray)) / dobj < opt_.tol_infeas) {
        sol.status = Status::PrimalInfeasible;
        break;
      }
    }
    if (pobj < 0) {
      RVec ax_orig(ax.size());
      for (Eigen::Index i = 0; i < ax.size(); ++i) ax_orig(i) = ax(i) / w_.scale(i);
      if (ax_orig.norm() / -pobj < opt_.tol_infeas) {
        sol.status = Status::DualInfeasible;
        break;
      }
    }
    if (iter == opt_.max_iter) break;

    std::vector<RMat> zinv(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      if (w_.sizes[k] == 1) {
        zinv[k] = RMat::Constant(1, 1, 1 / it.z[k](0, 0));
        continue;
      }
      Eigen::LLT<RMat> llt(it.z[k]);
      if (llt.info() != Eigen::Success) {
        sol.status = Status::NumericalError;
        break;
      }
      zinv[k] = sym(llt.solve(RMat::Identity(w_.sizes[k], w_.sizes[k])));
    }
    if (sol.status == Status::NumericalError) break;

    RMat m;
    if (!schur(it, zinv, m)) {
      sol.status = Status::NumericalError;
      break;
    }
    Eigen::LLT<RMat> mfac(m);
    Eigen::LDLT<RMat> mfac_ldlt;
    bool use_ldlt = false;
    if (mfac.info() != Eigen::Success) {
      const Scalar reg = 1e-14 * std::max<Scalar>(1, m.diagonal().cwiseAbs().maxCoeff());
      mfac_ldlt.compute(m + reg * RMat::Identity(m.rows(), m.cols()));
      if (mfac_ldlt.info() != Eigen::Success || !mfac_ldlt.isPositive()) {
        sol.status = Status::NumericalError;
        break;
      }
      use_ldlt = true;
    }

    // Precomputed part of the right-hand side: X Rd Z^-1.
    std::vector<RMat> xrdz(nb);
    for (std::size_t k = 0; k < nb; ++k) xrdz[k] = it.x[k] * rd[k] * zinv[k];

    auto direction = [&](const std::vector<RMat>& target, std::vector<RMat>& dx, RVec& dy, std::vector<RMat>& dz) {
      std::vector<RMat> tmp(nb);
      for (std::size_t k = 0; k < nb; ++k) tmp[k] = target[k] - xrdz[k];
      const RVec rhs = rp - apply_a(tmp);
      auto solve_m = [&](const RVec& r) { return use_ldlt ? RVec(mfac_ldlt.solve(r)) : RVec(mfac.solve(r)); };
      auto expand = [&] {
        const std::vector<RMat> atdy = apply_at(dy);
        dz.resize(nb);
        dx.resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
          dz[k] = rd[k] - atdy[k];
          dx[k] = sym(target[k] - it.x[k] * dz[k] * zinv[k]);
        }
      };
      dy = solve_m(rhs);
      expand();
      // Iterative refinement against the unassembled operator A(dx) = rp.
      for (int pass = 0; pass < 3; ++pass) {
        const RVec res = rp - apply_a(dx);
        if (res.norm() <= 1e-15 * (1 + rp.norm())) break;
        dy += solve_m(res);
        expand();
      }
    };

    auto steps = [&](const std::vector<RMat>& dx, const std::vector<RMat>& dz) {
      Scalar ap = std::numeric_limits<Scalar>::infinity();
      Scalar ad = std::numeric_limits<Scalar>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(it.x[k], dx[k]));
        ad = std::min(ad, max_step(it.z[k], dz[k]));
      }
      return std::pair<Scalar, Scalar>(ap, ad);
    };

    // Predictor.
    std::vector<RMat> target(nb), dxp, dzp;
    RVec dyp;
    for (std::size_t k = 0; k < nb; ++k) target[k] = -it.x[k];
    direction(target, dxp, dyp, dzp);
    auto [app, adp] = steps(dxp, dzp);
    app = std::min<Scalar>(1, app);
    adp = std::min<Scalar>(1, adp);
    Scalar mu_aff = 0;
    for (std::size_t k = 0; k < nb; ++k) mu_aff += inner(it.x[k] + app * dxp[k], it.z[k] + adp * dzp[k]);
    mu_aff /= n;
    const Scalar sigma = std::clamp(std::pow(std::max<Scalar>(mu_aff, 0) / mu, 3), Scalar(0), Scalar(1));

    // Corrector.
    for (std::size_t k = 0; k < nb; ++k) target[k] = sigma * mu * zinv[k] - it.x[k] - dxp[k] * dzp[k] * zinv[k];
    std::vector<RMat> dx, dz;
    RVec dy;
    direction(target, dx, dy, dz);
    auto [ap, ad] = steps(dx, dz);
    const Scalar gamma = 0.9 + 0.09 * std::min<Scalar>(1, std::min(app, adp));
    ap = std::min<Scalar>(1, gamma * ap);
    ad = std::min<Scalar>(1, gamma * ad);

    if (!dy.allFinite()) {
      sol.status = Status::NumericalError;
      break;
    }
    if (ap < 1e-12 && ad < 1e-12) {
      if (++stalls >= 3) {
        sol.status = Status::NumericalError;
        break;
      }
    } else {
      stalls = 0;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      it.x[k] = sym(it.x[k] + ap * dx[k]);
      it.z[k] = sym(it.z[k] + ad * dz[k]);
    }
    it.y += ad * dy;
  }

  sol.primal = it.x;
  sol.dual_slack = it.z;
  sol.dual = it.y;  // scaled; mapped back by the caller
  return sol;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options) {
  problem.validate();
  const int m = problem.num_constraints();
  const std::size_t nb = problem.block_sizes.size();

  Working w;
  const PresolveOutcome pre = presolve(problem, w);
  SdpSolution sol;
  if (pre.infeasible) {
    sol.status = Status::PrimalInfeasible;
    sol.dual = pre.certificate;
    for (std::size_t k = 0; k < nb; ++k) {
      const int n = problem.block_sizes[k];
      sol.primal.push_back(RMat::Zero(n, n));
      sol.dual_slack.push_back(RMat::Zero(n, n));
    }
    if (options.on_solve) options.on_solve(sol);
    return sol;
  }
  if (w.kept.empty()) throw InvalidArgument("SdpProblem: all constraints are zero");

  Ipm ipm(w, options);
  sol = ipm.run();
  sol.dropped_constraints = w.dropped;

  RVec y = RVec::Zero(m);
  for (std::size_t r = 0; r < w.kept.size(); ++r) {
    y(w.kept[r]) = w.scale(static_cast<Eigen::Index>(r)) * sol.dual(static_cast<Eigen::Index>(r));
  }
  sol.dual = y;

  // Report values and residuals against the original data.
  Scalar pobj = 0, xz = 0, cnorm2 = 0;
  std::vector<RMat> rd(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    rd[k] = w.c[k] - sol.dual_slack[k];
    pobj += inner(w.c[k], sol.primal[k]);
    xz += inner(sol.primal[k], sol.dual_slack[k]);
    cnorm2 += w.c[k].squaredNorm();
  }
  RVec rp(m), b(m);
  for (int i = 0; i < m; ++i) {
    const auto& con = problem.constraints[static_cast<std::size_t>(i)];
    Scalar ax = 0;
    for (const auto& t : con.terms) {
      ax += inner(sym(t.matrix), sol.primal[static_cast<std::size_t>(t.block)]);
      rd[static_cast<std::size_t>(t.block)] -= y(i) * sym(t.matrix);
    }
    b(i) = con.rhs;
    rp(i) = con.rhs - ax;
  }
  sol.primal_value = pobj;
  sol.dual_value = b.dot(y);
  sol.gap = xz;
  sol.primal_residual = rp.norm() / (1 + b.norm());
  sol.dual_residual = std::sqrt(frob2(rd)) / (1 + std::sqrt(cnorm2));

  if (sol.status == Status::PrimalInfeasible) {
    const Scalar by = sol.dual_value;
    if (by > 0) {
      sol.dual /= by;
      for (auto& zk : sol.dual_slack) zk /= by;
    }
  } else if (sol.status == Status::DualInfeasible) {
    const Scalar cx = -sol.primal_value;
    if (cx > 0) {
      for (auto& xk : sol.primal) xk /= cx;
    }
  }
  if (options.on_solve) options.on_solve(sol);
  return sol;
}

BisectionResult bisect_feasibility(const FeasibilityTest& feasible, Scalar lo, Scalar hi, Scalar tol,
                                   int grid_points) {
  if (!(hi > lo)) throw InvalidArgument("bisect_feasibility: need lo < hi");
  if (!(tol > 0)) throw InvalidArgument("bisect_feasibility: tol must be positive");
  grid_points = std::max(grid_points, 2);
  BisectionResult res;
  for (int i = 0; i < grid_points; ++i) {
    const Scalar p = lo + (hi - lo) * i / (grid_points - 1);
    res.probes.emplace_back(p, feasible(p));
    ++res.evaluations;
  }
  int flips = 0;
  std::size_t flip_at = 0;
  for (std::size_t i = 1; i < res.probes.size(); ++i) {
    if (res.probes[i].second != res.probes[i - 1].second) {
      ++flips;
      flip_at = i;
    }
  }
  if (flips > 1) {
    throw NonMonotoneDetected("bisect_feasibility: feasibility flips " + std::to_string(flips) +
                              " times on the probe grid");
  }
  if (flips == 0) {
    if (!res.probes.front().second) throw Error("bisect_feasibility: no feasible parameter in range");
    res.critical = lo;
    res.bracket = {lo, lo};
    return res;
  }
  // infeasible side a, feasible side b
  Scalar a = res.probes[flip_at - 1].first;
  Scalar b = res.probes[flip_at].first;
  if (res.probes[flip_at - 1].second) std::swap(a, b);
  while (std::abs(b - a) > tol) {
    const Scalar mid = (a + b) / 2;
    ++res.evaluations;
    if (feasible(mid)) {
      b = mid;
    } else {
      a = mid;
    }
  }
  res.bracket = {a, b};
  res.critical = (a + b) / 2;
  return res;
}

BisectionResult bisect_feasibility(const std::function<SdpProblem(Scalar)>& builder, Scalar lo, Scalar hi,
                                   Scalar tol, const SolveOptions& options, int grid_points) {
  return bisect_feasibility([&](Scalar p) { return solve(builder(p), options).optimal(); }, lo, hi, tol,
                            grid_points);
}

}  // namespace sqpm::sdp
