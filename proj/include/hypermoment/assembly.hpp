#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "hypermoment/moment_state.hpp"

namespace hypermoment {

// Coefficient matrix of the direction-j advection term of the moment system,
// acting on the moment vector w. With regularized = false this is the bare
// Grad closure; with regularized = true the top-grade rows carry the
// characteristic speed correction that restores hyperbolicity. Directions
// are 1-based.
template <typename Scalar>
DenseMatrix<Scalar> flux_jacobian(const MomentState<Scalar>& s,
                                  int direction = 1, bool regularized = true) {
  if (direction < 1 || direction > s.D)
    throw ValidationError("direction out of range");
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  const auto& table = index_table(s.D, s.M);
  const int N = table.size();
  const int D = s.D, M = s.M;
  const int j = direction - 1;
  const Scalar rho = s.rho, theta = s.theta;
  DenseMatrix<Scalar> A = DenseMatrix<Scalar>::Zero(N, N);

  auto fval = [&](const MultiIndex& b) { return coeff(s, b); };
  auto pval = [&](int a, int b) {
    MultiIndex idx(D, 0);
    ++idx[a];
    ++idx[b];
    Scalar v = fval(idx);
    return a == b ? rho * theta + Scalar(2) * v : v;
  };
  // Column contribution of c times the x_j-derivative of the Hermite
  // coefficient f_b expressed through the w variables.
  auto dispatch_f = [&](int row, const MultiIndex& b, Scalar c) {
    int g = 0;
    for (int bi : b) {
      if (bi < 0) return;
      g += bi;
    }
    if (g > M) return;
    if (g == 0) {
      A(row, 0) += c;
      return;
    }
    if (g == 1) return;
    int col = table.position(b);
    if (g == 2) {
      bool diag = false;
      for (int d = 0; d < D; ++d) diag = diag || b[d] == 2;
      if (diag) {
        // f_{2e_i} = w_{N(2e_i)} - (1/D) sum_d w_{N(2e_d)}
        A(row, col) += c;
        for (int d = 0; d < D; ++d) {
          MultiIndex dd(D, 0);
          dd[d] = 2;
          A(row, table.position(dd)) -= c / Scalar(D);
        }
        return;
      }
    }
    A(row, col) += c;
  };

  for (int row = 0; row < N; ++row) {
    const MultiIndex& a = table.index(row);
    const int g = grade(a);

    if (g == 0) {
      A(row, 0) += s.u[j];
      A(row, 1 + j) += rho;
      continue;
    }
    if (g == 1) {
      int i = 0;
      while (a[i] == 0) ++i;
      A(row, row) += s.u[j];
      MultiIndex pidx(D, 0);
      ++pidx[i];
      ++pidx[j];
      A(row, table.position(pidx)) += (i == j ? Scalar(2) : Scalar(1)) / rho;
      continue;
    }

    int diag_i = -1;
    if (g == 2)
      for (int d = 0; d < D; ++d)
        if (a[d] == 2) diag_i = d;
    if (diag_i >= 0) {
      // Row of p_{2e_i}/2.
      const int i = diag_i;
      const Scalar c = Scalar(2 * (i == j) + 1);
      A(row, row) += s.u[j];
      A(row, 1 + j) += (Scalar(1) / Scalar(2) + Scalar(i == j)) * rho * theta;
      for (int d = 0; d < D; ++d)
        A(row, 1 + d) += c * fval(shifted(shifted(a, d, -1), j, +1));
      dispatch_f(row, shifted(a, j, +1), c);
      continue;
    }

    // Rows of f_alpha (mixed second order and 3 <= |alpha| <= M).
    const bool keep = !(regularized && g == M);
    const Scalar aj1 = Scalar(a[j] + 1);

    dispatch_f(row, shifted(a, j, -1), theta);
    dispatch_f(row, a, s.u[j]);
    if (g < M) dispatch_f(row, shifted(a, j, +1), aj1);

    Scalar c_theta = Scalar(0);
    for (int k = 0; k < D; ++k) {
      c_theta += theta * fval(shifted(shifted(a, k, -2), j, -1));
      if (keep) c_theta += aj1 * fval(shifted(shifted(a, k, -2), j, +1));
    }
    A(row, 0) += -theta / (Scalar(2) * rho) * c_theta;
    for (int d = 0; d < D; ++d) {
      MultiIndex dd(D, 0);
      dd[d] = 2;
      A(row, table.position(dd)) += c_theta / (Scalar(D) * rho);
    }

    Scalar c_alpha = Scalar(0);
    for (int k = 0; k < D; ++k) c_alpha += fval(shifted(a, k, -2));

    for (int d = 0; d < D; ++d) {
      Scalar cu = theta * fval(shifted(shifted(a, d, -1), j, -1));
      if (keep) cu += aj1 * fval(shifted(shifted(a, d, -1), j, +1));
      cu -= c_alpha / (Scalar(D) * rho) * pval(j, d);
      A(row, 1 + d) += cu;
    }

    for (int d = 0; d < D; ++d) {
      Scalar c = fval(shifted(a, d, -1)) / rho;
      if (c == Scalar(0)) continue;
      MultiIndex pidx(D, 0);
      ++pidx[j];
      ++pidx[d];
      A(row, table.position(pidx)) += (d == j ? Scalar(-2) : Scalar(-1)) * c;
    }

    const Scalar cq = -c_alpha / (Scalar(D) * rho);
    if (cq != Scalar(0)) {
      MultiIndex b3(D, 0);
      b3[j] = 3;
      dispatch_f(row, b3, Scalar(3) * cq);
      for (int d = 0; d < D; ++d) {
        if (d == j) continue;
        MultiIndex b(D, 0);
        b[j] = 1;
        b[d] = 2;
        dispatch_f(row, b, cq);
      }
    }
  }
  return A;
}

// Directional matrix sum_j n_j M_j along a unit vector n.
template <typename Scalar>
DenseMatrix<Scalar> directional_jacobian(const MomentState<Scalar>& s,
                                         const DenseVector<Scalar>& n,
                                         bool regularized = true) {
  if (n.size() != s.D) throw ValidationError("direction vector length must equal D");
  if (std::abs(n.norm() - Scalar(1)) > Scalar(tolerance("UNIT", 1e-10)))
    throw ValidationError("direction vector must have unit length");
  DenseMatrix<Scalar> A =
      DenseMatrix<Scalar>::Zero(state_size(s.D, s.M), state_size(s.D, s.M));
  for (int j = 0; j < s.D; ++j)
    if (n[j] != Scalar(0)) A += n[j] * flux_jacobian(s, j + 1, regularized);
  return A;
}

// Diagonal of the similarity scaling: 1/rho, then 1/sqrt(theta) for each
// velocity slot, then 1/(rho theta^{|alpha|/2}) for |alpha| >= 2.
template <typename Scalar>
DenseVector<Scalar> scaling_diagonal(const MomentState<Scalar>& s) {
  const auto& table = index_table(s.D, s.M);
  DenseVector<Scalar> d(table.size());
  d[0] = Scalar(1) / s.rho;
  for (int i = 0; i < s.D; ++i) d[1 + i] = Scalar(1) / std::sqrt(s.theta);
  for (int pos = s.D + 1; pos < table.size(); ++pos) {
    int g = grade(table.index(pos));
    d[pos] = Scalar(1) / (s.rho * std::pow(s.theta, Scalar(g) / Scalar(2)));
  }
  return d;
}

// Dimensionless matrix Lambda (A_hat - u_1 I) Lambda^{-1} / sqrt(theta);
// entries depend only on the normalized moments g_alpha.
template <typename Scalar>
DenseMatrix<Scalar> scaled_jacobian(const MomentState<Scalar>& s) {
  DenseMatrix<Scalar> A = flux_jacobian(s, 1, true);
  const int N = static_cast<int>(A.rows());
  DenseVector<Scalar> d = scaling_diagonal(s);
  A.diagonal().array() -= s.u[0];
  return d.asDiagonal() * A * d.cwiseInverse().asDiagonal() / std::sqrt(s.theta);
}

}  // namespace hypermoment
