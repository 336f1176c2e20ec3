#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hypermoment/common.hpp"
#include "hypermoment/multi_index.hpp"

namespace hypermoment {

// Probabilists' Hermite polynomial: He_0 = 1, He_1 = x,
// He_{k+1}(x) = x He_k(x) - k He_{k-1}(x).
template <typename Scalar>
Scalar hermite_value(int k, Scalar x) {
  if (k < 0) throw ValidationError("hermite_value: negative order");
  if (k == 0) return Scalar(1);
  Scalar hm = Scalar(1);
  Scalar h = x;
  for (int j = 1; j < k; ++j) {
    Scalar hp = x * h - Scalar(j) * hm;
    hm = h;
    h = hp;
  }
  return h;
}

// Roots of He_k in ascending order, computed from the symmetric tridiagonal
// recurrence matrix and symmetrized so the set is exactly closed under
// negation; odd k contributes an exact zero.
template <typename Scalar = double>
std::vector<Scalar> hermite_roots(int k) {
  if (k < 1) throw ValidationError("hermite_roots: order must be positive");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat J = Mat::Zero(k, k);
  for (int j = 1; j < k; ++j) {
    Scalar b = std::sqrt(Scalar(j));
    J(j, j - 1) = b;
    J(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  if (es.info() != Eigen::Success)
    throw NumericError("hermite_roots: eigensolver failed");
  std::vector<Scalar> r(es.eigenvalues().data(), es.eigenvalues().data() + k);
  std::sort(r.begin(), r.end());
  for (int i = 0; 2 * i < k; ++i) {
    Scalar v = (r[k - 1 - i] - r[i]) / Scalar(2);
    r[k - 1 - i] = v;
    r[i] = -v;
  }
  if (k % 2 == 1) r[k / 2] = Scalar(0);
  return r;
}

// Multiplicity of the He_k factor in the characteristic polynomial of the
// regularized system with D dimensions and order M.
inline std::int64_t hermite_factor_multiplicity(int D, int M, int k) {
  if (k < 1 || k > M + 1) return 0;
  if (D == 1) return k == M + 1 ? 1 : 0;
  return binomial(D - 1 + M - k, D - 2);
}

template <typename Scalar>
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  Scalar log_abs = -std::numeric_limits<Scalar>::infinity();
};

// Characteristic polynomial of the regularized flux Jacobian, as sign and
// log magnitude of prod_k (He_k((lambda - u1)/sqrt(theta)) theta^{k/2})^{mult(k)}.
template <typename Scalar>
SignedLog<Scalar> char_poly_signed_log(int D, int M, Scalar u1, Scalar theta,
                                       Scalar lambda) {
  if (D < 1) throw ValidationError("char_poly: dimension must be positive");
  if (!(theta > Scalar(0)))
    throw ValidationError("char_poly: theta must be positive");
  Scalar s = (lambda - u1) / std::sqrt(theta);
  Scalar log_theta = std::log(theta);
  SignedLog<Scalar> out{1, Scalar(0)};
  for (int k = 1; k <= M + 1; ++k) {
    std::int64_t m = hermite_factor_multiplicity(D, M, k);
    if (m == 0) continue;
    Scalar h = hermite_value(k, s);
    if (h == Scalar(0)) return SignedLog<Scalar>{};
    if (h < Scalar(0) && (m % 2)) out.sign = -out.sign;
    out.log_abs +=
        Scalar(m) * (std::log(std::abs(h)) + Scalar(k) / Scalar(2) * log_theta);
  }
  return out;
}

template <typename Scalar>
Scalar char_poly_value(int D, int M, Scalar u1, Scalar theta, Scalar lambda) {
  auto sl = char_poly_signed_log(D, M, u1, theta, lambda);
  return sl.sign == 0 ? Scalar(0) : Scalar(sl.sign) * std::exp(sl.log_abs);
}

}  // namespace hypermoment
