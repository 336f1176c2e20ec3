#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypermoment/assembly.hpp"
#include "hypermoment/moment_state.hpp"
#include "hypermoment/multi_index.hpp"

namespace hypermoment {

namespace detail {

template <typename Scalar>
void validate_rotation(const DenseMatrix<Scalar>& G) {
  if (G.rows() != G.cols()) throw ValidationError("rotation must be square");
  Scalar tol = tolerance("ORTHOGONAL", 1e-12);
  int D = static_cast<int>(G.rows());
  Scalar defect =
      (G * G.transpose() - DenseMatrix<Scalar>::Identity(D, D)).norm();
  if (defect > tol * D) throw ValidationError("matrix is not orthogonal");
  if (std::abs(G.determinant() - Scalar(1)) > tol * D)
    throw ValidationError("matrix is not a proper rotation");
}

// Visit every tuple in {1..D}^m.
template <typename Fn>
void for_each_digit_tuple(int D, int m, Fn&& fn) {
  std::vector<int> phi(m, 1);
  while (true) {
    fn(phi);
    int p = m - 1;
    while (p >= 0 && phi[p] == D) {
      phi[p] = 1;
      --p;
    }
    if (p < 0) return;
    ++phi[p];
  }
}

template <typename Scalar>
Scalar digit_product(const DenseMatrix<Scalar>& G,
                     const std::vector<int>& theta,
                     const std::vector<int>& phi) {
  Scalar prod = 1;
  for (std::size_t i = 0; i < theta.size(); ++i)
    prod *= G(theta[i] - 1, phi[i] - 1);
  return prod;
}

}  // namespace detail

// Action of a spatial rotation on the whole coefficient vector: the density
// slot is fixed, velocity slots transform by G, and each higher grade block
// carries the symmetrized tensor action.  The grade-two block acts on the
// stored half-pressure slots directly; orthogonality of G fixes the
// isotropic part, so no basis change is needed.
template <typename Scalar>
DenseMatrix<Scalar> rotation_operator(const DenseMatrix<Scalar>& G, int M) {
  detail::validate_rotation(G);
  int D = static_cast<int>(G.rows());
  const auto& table = index_table(D, M);
  int N = static_cast<int>(table.size());
  DenseMatrix<Scalar> R = DenseMatrix<Scalar>::Zero(N, N);
  R(0, 0) = 1;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      R(static_cast<int>(table.position(unit_index(D, i))),
        static_cast<int>(table.position(unit_index(D, j)))) = G(i, j);
  for (const MultiIndex& a : table.indices()) {
    int m = grade(a);
    if (m < 2) continue;
    int row = static_cast<int>(table.position(a));
    std::vector<int> theta = direction_digits(a);
    Scalar inv_afact = Scalar(1) / Scalar(multi_factorial(a));
    detail::for_each_digit_tuple(D, m, [&](const std::vector<int>& phi) {
      MultiIndex sig = digit_counts(phi, D);
      Scalar coeff = Scalar(multi_factorial(sig)) * inv_afact *
                     detail::digit_product(G, theta, phi);
      R(row, static_cast<int>(table.position(sig))) += coeff;
    });
  }
  return R;
}

template <typename Scalar>
MomentState<Scalar> rotate_state(const MomentState<Scalar>& s,
                                 const DenseMatrix<Scalar>& G) {
  DenseMatrix<Scalar> R = rotation_operator(G, s.M);
  DenseVector<Scalar> w = R * to_w_vector(s);
  return from_w_vector(s.D, s.M, w);
}

// Deterministic completion of a unit vector n to a proper rotation whose
// first row is n: orthogonalize the standard basis against the rows built
// so far, always taking the candidate with the largest residual.
template <typename Scalar>
DenseMatrix<Scalar> complete_rotation(const DenseVector<Scalar>& n) {
  int D = static_cast<int>(n.size());
  if (std::abs(n.norm() - Scalar(1)) > tolerance("UNIT", 1e-10))
    throw ValidationError("direction must be a unit vector");
  DenseMatrix<Scalar> G(D, D);
  G.row(0) = n.transpose();
  for (int r = 1; r < D; ++r) {
    DenseVector<Scalar> best = DenseVector<Scalar>::Zero(D);
    Scalar best_norm = -1;
    for (int c = 0; c < D; ++c) {
      DenseVector<Scalar> cand = DenseVector<Scalar>::Unit(D, c);
      for (int k = 0; k < r; ++k)
        cand -= G.row(k).dot(cand.transpose()) * G.row(k).transpose();
      if (cand.norm() > best_norm) {
        best_norm = cand.norm();
        best = cand;
      }
    }
    G.row(r) = (best / best_norm).transpose();
  }
  if (G.determinant() < 0) G.row(D - 1) = -G.row(D - 1);
  return G;
}

// Frobenius residual of the rotation invariance identity: the directional
// flux Jacobian equals the rotated-frame Jacobian conjugated back.
template <typename Scalar>
Scalar rotation_invariance_residual(const MomentState<Scalar>& s,
                                    const DenseVector<Scalar>& n) {
  DenseMatrix<Scalar> G = complete_rotation(n);
  DenseMatrix<Scalar> R = rotation_operator(G, s.M);
  DenseMatrix<Scalar> Rinv =
      rotation_operator(DenseMatrix<Scalar>(G.transpose()), s.M);
  MomentState<Scalar> rotated = from_w_vector(s.D, s.M,
                                              DenseVector<Scalar>(R * to_w_vector(s)));
  DenseMatrix<Scalar> Ahat = flux_jacobian(rotated, 1, true);
  DenseMatrix<Scalar> lhs = directional_jacobian(s, n, true);
  return (lhs - Rinv * Ahat * R).norm() / Ahat.norm();
}

// Brute-force check of the index splitting identity: summing the rotation
// coefficients over all arrangements of alpha+beta equals picking the beta
// digits out of theta in every injective way and summing the rest over the
// arrangements of alpha.
template <typename Scalar>
bool index_count_identity(const DenseMatrix<Scalar>& G, const MultiIndex& a,
                          const MultiIndex& b, const std::vector<int>& theta) {
  int D = static_cast<int>(G.rows());
  int m = grade(a) + grade(b);
  if (static_cast<int>(theta.size()) != m)
    throw ValidationError("digit tuple must have grade |a| + |b|");
  MultiIndex ab = a;
  for (int d = 0; d < D; ++d) ab[d] += b[d];
  Scalar theta_fact = Scalar(multi_factorial(digit_counts(theta, D)));

  Scalar lhs = 0;
  std::vector<int> arrangement = direction_digits(ab);
  std::sort(arrangement.begin(), arrangement.end());
  do {
    lhs += Scalar(multi_factorial(digit_counts(arrangement, D))) / theta_fact *
           detail::digit_product(G, theta, arrangement);
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));

  int mb = grade(b);
  std::vector<int> beta_digits = direction_digits(b);
  Scalar rhs = 0;
  std::vector<int> pick(mb);
  std::vector<bool> used(m, false);
  auto inner_sum = [&]() {
    std::vector<int> rest;
    for (int i = 0; i < m; ++i)
      if (!used[i]) rest.push_back(theta[i]);
    std::vector<int> arr = direction_digits(a);
    std::sort(arr.begin(), arr.end());
    Scalar acc = 0;
    if (arr.empty()) return Scalar(1);
    do {
      acc += detail::digit_product(G, rest, arr);
    } while (std::next_permutation(arr.begin(), arr.end()));
    return acc;
  };
  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == mb) {
      std::vector<int> picked(mb);
      for (int i = 0; i < mb; ++i) picked[i] = theta[pick[i]];
      rhs += detail::digit_product(G, picked, beta_digits) * inner_sum();
      return;
    }
    for (int i = 0; i < m; ++i) {
      if (used[i]) continue;
      used[i] = true;
      pick[depth] = i;
      self(self, depth + 1);
      used[i] = false;
    }
  };
  recurse(recurse, 0);
  rhs *= Scalar(multi_factorial(a)) / theta_fact;

  Scalar scale = std::max({Scalar(1), std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) <= Scalar(1e-10) * scale;
}

// Partition check: summing an arbitrary digit-tuple function over the whole
// cube equals grouping the tuples by their digit counts.
template <typename Scalar, typename Fn>
bool index_partition_identity(int D, int m, Fn&& F) {
  Scalar whole = 0;
  detail::for_each_digit_tuple(D, m, [&](const std::vector<int>& phi) {
    whole += F(phi);
  });
  Scalar grouped = 0;
  for (const MultiIndex& b : enumerate_indices(D, m)) {
    if (grade(b) != m) continue;
    std::vector<int> arr = direction_digits(b);
    std::sort(arr.begin(), arr.end());
    do {
      grouped += F(arr);
    } while (std::next_permutation(arr.begin(), arr.end()));
  }
  Scalar scale = std::max({Scalar(1), std::abs(whole), std::abs(grouped)});
  return std::abs(whole - grouped) <= Scalar(1e-10) * scale;
}

}  // namespace hypermoment
