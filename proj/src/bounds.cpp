#include <cmath>

#include "haarverify/verifier.hpp"

// Everything here works cell by cell. On a cell of width h = 1/M with centre
// t_q, the approximate solution is u0 + m_q + p_q s (|s| <= h/2), so any
// quadratic expression in it is a quadratic in s whose cell mean and
// deviation from the mean are known exactly. The finite coefficients of a
// function are h H (cell means); the infinite ones have l2 norm equal to the
// L2 norm of the deviation from the cell means.
//
// Facts used for v(t) = int_0^t y with y in L2:
//   |v(t)| <= sqrt(t) |y|,  |v|_L2 <= |y| / sqrt 2,  |v w|_L2 <= |x||y| / sqrt 3 for w = int x.
// When y has zero mean on every cell, v vanishes at the cell ends, and on a cell
//   |int v| <= h^(3/2)/sqrt 12 |y|_cell,   |v|_cell <= (h/pi) |y|_cell.
// Deviation from the cell mean: |f - mean f|_cell <= (h/pi) |f'|_cell.

namespace haarverify {

namespace {

using Grid = std::vector<std::vector<Interval>>;

Interval max_abs(const IntervalVec& v) {
  Interval m(0.0);
  for (const Interval& x : v) m = max(m, abs(x));
  return m;
}

// M_PI lies below pi, so dividing by it overestimates.
const Interval kPiBelow(M_PI);

}  // namespace

Interval block_operator_norm(const std::vector<std::vector<Interval>>& g) {
  Interval best(0.0);
  for (const auto& row : g) {
    Interval s(0.0);
    for (const Interval& x : row) s += x;
    best = max(best, s);
  }
  return best;
}

QuadraticField field_of(const ProblemSpec& spec) {
  QuadraticField f;
  auto logistic = [&](double lambda, double u0) {
    f.n = 1;
    f.u0 = {u0};
    f.b = {0.0};
    f.L = {lambda};
    f.Q = {-lambda};
  };
  if (auto* p = spec.as<Logistic>()) {
    logistic(p->lambda, p->u0);
  } else if (auto* q = spec.as<ForcedLogistic>()) {
    logistic(q->lambda, q->u0);
  } else {
    const Lorenz& l = *spec.as<Lorenz>();
    f.n = 3;
    f.u0 = {l.x0, l.y0, l.z0};
    f.b = {0.0, 0.0, 0.0};
    f.L = {-l.sigma, l.sigma, 0.0, l.rho, -1.0, 0.0, 0.0, 0.0, -l.beta};
    f.Q.assign(27, 0.0);
    f.Q[(1 * 3 + 0) * 3 + 2] = -1.0;  // -x z in the y equation
    f.Q[(2 * 3 + 0) * 3 + 1] = 1.0;   // x y in the z equation
  }
  return f;
}

BoundSet bounds_quadratic(const OpMatrixSet& set, const QuadraticField& field, const Eigen::VectorXd& cbar,
                          const Eigen::MatrixXd& Apoint, const std::vector<Eigen::VectorXd>& forcing) {
  const int n = field.n;
  const Index M = static_cast<Index>(set.M);
  const auto nn = static_cast<std::size_t>(n);
  if (field.u0.size() != nn || field.b.size() != nn || field.L.size() != nn * nn || field.Q.size() != nn * nn * nn)
    throw DimensionMismatch("vector field coefficients do not match the channel count");
  if (cbar.size() != n * M || Apoint.rows() != n * M || Apoint.cols() != n * M)
    throw DimensionMismatch("solution or preconditioner size differs from channels * M");
  if (!forcing.empty() && forcing.size() != nn) throw DimensionMismatch("forcing needs one entry per channel");
  for (const auto& g : forcing)
    if (g.size() != 0 && g.size() != M) throw DimensionMismatch("forcing length differs from M");

  const int J = set.J;
  BoundSet out;
  auto record = [&](const char* bound, const std::string& name, const Interval& v) {
    out.terms.push_back({bound, name, v});
    return v;
  };
  auto chan = [&](const char* what, int k) { return std::string(what) + (n > 1 ? " row " + std::to_string(k) : ""); };

  const Interval h = pow2(-(J + 1));
  const Interval h2_12 = h * h / 12.0;
  const Interval sqrt3 = sqrt(Interval(3.0)), sqrt12 = sqrt(Interval(12.0));
  const Interval sqrth = pow2_half(-(J + 1));
  const Interval h_pi = h / kPiBelow;

  // Cell data: midpoint values U (absolute) and slopes p of every channel.
  std::vector<IntervalVec> c(nn), U(nn), p(nn);
  for (int k = 0; k < n; ++k) {
    c[k] = to_interval_vec(cbar.segment(k * M, M));
    p[k] = haarverify::apply(set.H, c[k], true);
    U[k] = haarverify::apply(set.H, haarverify::apply(set.P, c[k], true), true);
    for (Interval& x : U[k]) x += Interval(field.u0[k]);
  }
  auto sym = [&](int k, int l, int m) { return Interval(field.quad(k, l, m) + 0.0) + field.quad(k, m, l); };

  // Jacobian of the field along the cells: value at the centre and slope.
  std::vector<std::vector<IntervalVec>> gm(nn, std::vector<IntervalVec>(nn)), gp = gm;
  std::vector<std::vector<bool>> active(nn, std::vector<bool>(nn, false));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      gm[k][l].assign(static_cast<std::size_t>(M), Interval(field.lin(k, l)));
      gp[k][l].assign(static_cast<std::size_t>(M), Interval(0.0));
      bool any = field.lin(k, l) != 0.0;
      for (int m = 0; m < n; ++m) {
        const Interval s = sym(k, l, m);
        if (s.mag() == 0.0) continue;
        any = true;
        for (Index q = 0; q < M; ++q) {
          gm[k][l][q] += s * U[m][q];
          gp[k][l][q] += s * p[m][q];
        }
      }
      active[k][l] = any;
    }

  std::vector<std::vector<IntervalMat>> A(nn, std::vector<IntervalMat>(nn));
  Grid normA(nn, std::vector<Interval>(nn));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      A[k][j] = IntervalMat(Eigen::MatrixXd(Apoint.block(k * M, j * M, M, M)));
      normA[k][j] = mat_norm2_upper(A[k][j]);
    }

  // Y_M: exact cell means of f, so no remainder.
  // Y_inf: f is alpha + beta s + gamma s^2 on a cell, and its deviation from
  // the mean has squared norm h^3/12 beta^2 + h^5/180 gamma^2.
  {
    const Interval w1 = h * h * h / 12.0, w2 = h * h * h * h * h / 180.0;
    std::vector<IntervalVec> R(nn);
    Interval yinf(0.0);
    for (int k = 0; k < n; ++k) {
      IntervalVec mean(static_cast<std::size_t>(M), Interval(field.b[k]));
      if (!forcing.empty() && forcing[k].size() != 0)
        for (Index q = 0; q < M; ++q) mean[q] += Interval(forcing[k](q));
      Interval tail2(0.0);
      for (Index q = 0; q < M; ++q) {
        Interval beta(0.0), gamma(0.0);
        for (int l = 0; l < n; ++l) {
          mean[q] += field.lin(k, l) * U[l][q];
          beta += gm[k][l][q] * p[l][q];
          for (int m = 0; m < n; ++m) {
            const double a = field.quad(k, l, m);
            if (a == 0.0) continue;
            mean[q] += a * (U[l][q] * U[m][q] + h2_12 * (p[l][q] * p[m][q]));
            gamma += a * (p[l][q] * p[m][q]);
          }
        }
        tail2 += w1 * sqr(beta) + w2 * sqr(gamma);
      }
      R[k] = c[k] - h * haarverify::apply(set.H, mean);
      yinf = max(yinf, record("y_inf", chan("cell deviation", k), sqrt(tail2)));
    }
    out.y_inf = yinf;
    Interval ym(0.0);
    for (int k = 0; k < n; ++k) {
      IntervalVec row(static_cast<std::size_t>(M), Interval(0.0));
      for (int j = 0; j < n; ++j) row = row + A[k][j] * R[j];
      ym = max(ym, record("y_m", chan("preconditioned residual", k), vec_norm2(row)));
    }
    out.y_m = ym;
  }

  // Z_M constant part. For y = y_M + y_inf in channel l:
  //   (I - A B1) y_M, B1 the exact Jacobian of the projected system, and
  //   A h H (cell means of G(u) v_inf), which the cell facts bound through
  //   kappa_q = |g|_q sqrt(h/12) + |g'|_q h^(3/2) / (pi sqrt 12).
  // Both act on one channel, so a |y_M| + b |y_inf| <= sqrt(a^2 + b^2) |y|.
  {
    const IntervalMat Qmat = product(set.H, true, set.P, true);  // values of int at the centres
    Grid z(nn, std::vector<Interval>(nn, Interval(0.0)));
    for (int k = 0; k < n; ++k) {
      std::vector<IntervalMat> AH(nn);
      for (int j = 0; j < n; ++j) AH[j] = product(A[k][j], false, set.H, false);
      for (int l = 0; l < n; ++l) {
        IntervalMat R = (k == l) ? IntervalMat::identity(M) : IntervalMat(M, M);
        R -= A[k][l];
        IntervalMat S(M, M);
        bool anyS = false;
        Interval slope_part(0.0), tail_part(0.0);
        for (int j = 0; j < n; ++j) {
          if (!active[j][l]) continue;
          S.add_scaled(Interval(1.0), scale_cols(AH[j], gm[j][l]));
          anyS = true;
          // h^3/12 A H diag(g') H^T, with |A H| <= |A| sqrt M and |H^T| = sqrt M
          slope_part += normA[k][j] * max_abs(gp[j][l]) * h2_12;
          IntervalVec kappa(static_cast<std::size_t>(M));
          for (Index q = 0; q < M; ++q)
            kappa[q] = (abs(gm[j][l][q]) * sqrth + abs(gp[j][l][q]) * h * sqrth / kPiBelow) / sqrt12;
          tail_part += h * mat_norm2_upper(scale_cols(AH[j], kappa));
        }
        if (anyS) R.add_scaled(h, product(S, false, Qmat, false));
        const Interval a = mat_norm2_upper(R) + slope_part;
        record("z_m_const", chan("|I - A B1|", k) + " col " + std::to_string(l), a);
        record("z_m_const", chan("tail feedback", k) + " col " + std::to_string(l), tail_part);
        z[k][l] = sqrt(sqr(a) + sqr(tail_part));
      }
    }
    out.z_m_const = block_operator_norm(z);
  }

  // Z_M linear part: A Pi_M H of sum (Q_jlm + Q_jml) w_m v_l, each product at most |w||y| / sqrt 3.
  {
    Interval best(0.0);
    for (int k = 0; k < n; ++k) {
      Interval s(0.0);
      for (int j = 0; j < n; ++j) {
        Interval qsum(0.0);
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) qsum += abs(sym(j, l, m));
        s += normA[k][j] * qsum / sqrt3;
      }
      best = max(best, record("z_m_lin", chan("second derivative", k), s));
    }
    out.z_m_lin = best;
  }

  // Z_inf: deviation of G v from its cell means, with |(G v)'| <= max|G'| |v| + max|G| |y|.
  {
    Interval cst(0.0), lin(0.0);
    for (int k = 0; k < n; ++k) {
      Interval s(0.0), t(0.0);
      for (int l = 0; l < n; ++l) {
        if (!active[k][l]) continue;
        Interval gmax(0.0);
        for (Index q = 0; q < M; ++q) gmax = max(gmax, abs(gm[k][l][q]) + abs(gp[k][l][q]) * h / 2.0);
        s += h_pi * (max_abs(gp[k][l]) / sqrt2() + gmax);
        for (int m = 0; m < n; ++m) t += abs(sym(k, l, m)) * 2.0 * h_pi;
      }
      cst = max(cst, record("z_inf_const", chan("linearization", k), s));
      lin = max(lin, record("z_inf_lin", chan("second derivative", k), t));
    }
    out.z_inf_const = cst;
    out.z_inf_lin = lin;
  }
  return out;
}

BoundSet bounds_logistic(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                         double lambda, double u0) {
  return bounds_quadratic(set, field_of(ProblemSpec(Logistic{lambda, u0})), cbar, A);
}

BoundSet bounds_forced_logistic(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                                double lambda, double u0, const Eigen::VectorXd& g) {
  if (static_cast<std::size_t>(g.size()) != set.M) throw DimensionMismatch("forcing length differs from M");
  return bounds_quadratic(set, field_of(ProblemSpec(Logistic{lambda, u0})), cbar, A, {g});
}

BoundSet bounds_lorenz(const OpMatrixSet& set, const Eigen::VectorXd& cbar, const Eigen::MatrixXd& A,
                       const Lorenz& params) {
  return bounds_quadratic(set, field_of(ProblemSpec(params)), cbar, A);
}

BoundSet compute_bounds(const ProblemSpec& spec, const OpMatrixSet& set, const SolveResult& sol) {
  std::vector<Eigen::VectorXd> forcing;
  if (spec.as<ForcedLogistic>()) forcing.push_back(forcing_cells(set.M));
  return bounds_quadratic(set, field_of(spec), sol.cbar, sol.A, forcing);
}

}  // namespace haarverify
