#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "hypermoment/rotation.hpp"
#include "hypermoment/spectral.hpp"

using namespace hypermoment;
using Mat = DenseMatrix<double>;
using Vec = DenseVector<double>;

namespace {

MomentState<double> sample(int D, int M, unsigned seed, double scale = 0.1) {
  std::mt19937_64 rng(seed);
  return random_state<double>(D, M, rng, scale);
}

Mat planar(double ang) {
  Mat G(2, 2);
  G << std::cos(ang), std::sin(ang), -std::sin(ang), std::cos(ang);
  return G;
}

Mat axis_rotation(int axis, double ang) {
  Mat G = Mat::Identity(3, 3);
  int i = (axis + 1) % 3, j = (axis + 2) % 3;
  G(i, i) = std::cos(ang);
  G(i, j) = std::sin(ang);
  G(j, i) = -std::sin(ang);
  G(j, j) = std::cos(ang);
  return G;
}

Vec random_direction(int D, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vec n(D);
  for (int d = 0; d < D; ++d) n(d) = normal(rng);
  return n / n.norm();
}

// Rotation transform of arbitrary per-index data, straight from the
// digit-tuple sum.
template <typename Fn>
double transform_value(const Mat& G, const MultiIndex& a, Fn&& value) {
  for (int c : a)
    if (c < 0) return 0.0;
  int D = static_cast<int>(G.rows());
  std::vector<int> theta = direction_digits(a);
  double out = 0;
  detail::for_each_digit_tuple(D, grade(a), [&](const std::vector<int>& phi) {
    MultiIndex sig = digit_counts(phi, D);
    out += static_cast<double>(multi_factorial(sig)) / multi_factorial(a) *
           detail::digit_product(G, theta, phi) * value(sig);
  });
  return out;
}

}  // namespace

TEST_CASE("identity rotation gives the identity operator") {
  for (int D : {1, 2, 3}) {
    Mat R = rotation_operator(Mat(Mat::Identity(D, D)), 4);
    CHECK((R - Mat::Identity(R.rows(), R.cols())).norm() <= 1e-14);
  }
}

TEST_CASE("quarter turn permutes axis moments") {
  Mat G = planar(M_PI / 2);
  CHECK((G - (Mat(2, 2) << 0, 1, -1, 0).finished()).norm() <= 1e-15);
  const auto& table = index_table(2, 3);
  Mat R = rotation_operator(G, 3);
  int row30 = static_cast<int>(table.position({3, 0}));
  int col03 = static_cast<int>(table.position({0, 3}));
  CHECK(R(row30, col03) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(R.row(row30).cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-13));

  Vec u(2);
  u << 0.3, -0.2;
  auto s = maxwellian<double>(2, 3, 1.0, u, 1.0);
  auto rotated = rotate_state(s, G);
  CHECK(rotated.u(0) == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(rotated.u(1) == doctest::Approx(-0.3).epsilon(1e-14));
}

TEST_CASE("eighth turn mixes the second order slots with half weights") {
  Mat G = planar(M_PI / 4);
  Mat R = rotation_operator(G, 3);
  const auto& table = index_table(2, 3);
  int row = static_cast<int>(table.position({2, 0}));
  CHECK(R(row, table.position({2, 0})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(R(row, table.position({1, 1})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(R(row, table.position({0, 2})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("second order block matches the tensor congruence action") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    Mat G = axis_rotation(trial % 3, ang(rng)) *
            axis_rotation((trial + 1) % 3, ang(rng));
    auto s = sample(3, 3, 600 + trial);
    auto rotated = rotate_state(s, G);
    Mat P(3, 3), Pt(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        P(i, j) = pressure_component(s, i, j);
        Pt(i, j) = pressure_component(rotated, i, j);
      }
    CHECK((Pt - G * P * G.transpose()).norm() <= 1e-12 * P.norm());
  }
}

TEST_CASE("rotation preserves density temperature and the trace constraint") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int D : {2, 3})
    for (int M : {3, 4}) {
      auto s = sample(D, M, 700 + 10 * D + M);
      Mat G = D == 2 ? planar(ang(rng))
                     : Mat(axis_rotation(0, ang(rng)) * axis_rotation(2, ang(rng)));
      auto rotated = rotate_state(s, G);
      CHECK(rotated.rho == doctest::Approx(s.rho).epsilon(1e-14));
      CHECK(rotated.theta == doctest::Approx(s.theta).epsilon(1e-13));
      Vec gu = G * s.u;
      CHECK((rotated.u - gu).norm() <= 1e-13);
      double trace = 0;
      for (int d = 0; d < D; ++d)
        trace += coeff(rotated, shifted(MultiIndex(D, 0), d, 2));
      CHECK(std::abs(trace) <= 1e-13 * rotated.rho * rotated.theta);
      auto back = rotate_state(rotated, Mat(G.transpose()));
      CHECK((to_w_vector(back) - to_w_vector(s)).norm() <=
            1e-12 * to_w_vector(s).norm());
    }
}

TEST_CASE("operator blocks stay within a moment order") {
  Mat G = axis_rotation(1, 0.9);
  Mat R = rotation_operator(G, 4);
  const auto& table = index_table(3, 4);
  for (const MultiIndex& a : table.indices())
    for (const MultiIndex& b : table.indices()) {
      if (grade(a) == grade(b)) continue;
      CHECK(R(table.position(a), table.position(b)) == 0.0);
    }
}

TEST_CASE("rotation operators form a representation") {
  Mat Ga = axis_rotation(0, 0.7) * axis_rotation(2, 0.4);
  Mat Gb = axis_rotation(1, -1.2);
  for (int M : {3, 4}) {
    Mat lhs = rotation_operator(Ga, M) * rotation_operator(Gb, M);
    Mat rhs = rotation_operator(Mat(Ga * Gb), M);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    Mat inv = rotation_operator(Mat(Ga.transpose()), M);
    Mat I = Mat::Identity(lhs.rows(), lhs.cols());
    CHECK((rotation_operator(Ga, M) * inv - I).norm() <= 1e-12);
  }
  auto s = sample(3, 3, 808);
  auto composed = rotate_state(rotate_state(s, Gb), Ga);
  auto direct = rotate_state(s, Mat(Ga * Gb));
  CHECK((to_w_vector(composed) - to_w_vector(direct)).norm() <=
        1e-12 * to_w_vector(direct).norm());
}

TEST_CASE("improper or skew matrices are rejected") {
  Mat refl(2, 2);
  refl << 1, 0, 0, -1;
  CHECK_THROWS_AS(rotation_operator(refl, 3), ValidationError);
  Mat skew(2, 2);
  skew << 1, 0.2, 0, 1;
  CHECK_THROWS_AS(rotation_operator(skew, 3), ValidationError);
  Vec bad(2);
  bad << 0.5, 0.5;
  CHECK_THROWS_AS(complete_rotation(bad), ValidationError);
}

TEST_CASE("direction completion yields a proper rotation with first row n") {
  for (int D : {2, 3})
    for (unsigned seed = 0; seed < 8; ++seed) {
      Vec n = random_direction(D, 100 + seed);
      Mat G = complete_rotation(n);
      CHECK((G.row(0).transpose() - n).norm() <= 1e-14);
      CHECK((G * G.transpose() - Mat::Identity(D, D)).norm() <= 1e-13);
      CHECK(G.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
  Vec e1 = Vec::Unit(3, 0);
  CHECK((complete_rotation(e1) - Mat::Identity(3, 3)).norm() <= 1e-15);
}

TEST_CASE("directional jacobians are rotations of the axis jacobian") {
  auto s = sample(2, 3, 910);
  Vec e1 = Vec::Unit(2, 0);
  CHECK(rotation_invariance_residual(s, e1) <= 1e-14);
  for (int M : {3, 4, 5})
    for (unsigned seed = 0; seed < 4; ++seed) {
      auto state = sample(2, M, 920 + 10 * M + seed);
      Vec n = random_direction(2, 40 + seed);
      CHECK(rotation_invariance_residual(state, n) <= 1e-10);
    }
  for (unsigned seed = 0; seed < 4; ++seed) {
    auto state = sample(3, 3, 960 + seed);
    Vec n = random_direction(3, 50 + seed);
    CHECK(rotation_invariance_residual(state, n) <= 1e-10);
  }
}

TEST_CASE("directional spectrum is the shifted axis spectrum") {
  for (int D : {2, 3}) {
    auto s = sample(D, 4, 1200 + D);
    Vec n = random_direction(D, 77 + D);
    Mat A = directional_jacobian(s, n, true);
    Eigen::EigenSolver<Mat> es(A);
    std::vector<double> numeric(A.rows());
    for (int i = 0; i < A.rows(); ++i) numeric[i] = es.eigenvalues()(i).real();
    CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-9);
    std::sort(numeric.begin(), numeric.end());
    double un = s.u.dot(n);
    std::vector<double> analytic;
    for (int k = 1; k <= s.M + 1; ++k)
      for (double c : hermite_roots<double>(k))
        for (int m = 0; m < hermite_factor_multiplicity(D, s.M, k); ++m)
          analytic.push_back(un + c * std::sqrt(s.theta));
    std::sort(analytic.begin(), analytic.end());
    REQUIRE(analytic.size() == numeric.size());
    double cmax = hermite_roots<double>(s.M + 1).back();
    for (std::size_t i = 0; i < numeric.size(); ++i)
      CHECK(std::abs(numeric[i] - analytic[i]) <=
            1e-8 * (std::abs(un) + cmax * std::sqrt(s.theta)));
  }
}

TEST_CASE("index splitting identity by brute force") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int D : {2, 3}) {
    Mat G = D == 2 ? planar(ang(rng))
                   : Mat(axis_rotation(0, ang(rng)) * axis_rotation(1, ang(rng)));
    auto indices = enumerate_indices(D, 3);
    for (const MultiIndex& a : indices)
      for (const MultiIndex& b : indices) {
        if (grade(a) + grade(b) > 5 || grade(a) + grade(b) == 0) continue;
        bool all = true;
        detail::for_each_digit_tuple(
            D, grade(a) + grade(b), [&](const std::vector<int>& theta) {
              all = all && index_count_identity(G, a, b, theta);
            });
        CHECK(all);
      }
    MultiIndex zero(D, 0);
    MultiIndex one = unit_index(D, 0);
    CHECK(index_count_identity(G, one, zero, {1}));
    CHECK(index_count_identity(Mat(Mat::Identity(D, D)), one, one,
                               std::vector<int>{1, 2 % D + 1}));
  }
}

TEST_CASE("digit tuples partition by their counts") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int D : {2, 3})
    for (int m : {1, 2, 3, 4}) {
      std::map<std::vector<int>, double> data;
      detail::for_each_digit_tuple(D, m, [&](const std::vector<int>& phi) {
        data[phi] = val(rng);
      });
      bool ok = index_partition_identity<double>(
          D, m, [&](const std::vector<int>& phi) { return data.at(phi); });
      CHECK(ok);
    }
}

TEST_CASE("derivative transformation identities") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int D : {2, 3}) {
    Mat G = D == 2 ? planar(ang(rng))
                   : Mat(axis_rotation(2, ang(rng)) * axis_rotation(0, ang(rng)));
    std::map<MultiIndex, double> fdata;
    std::map<std::pair<MultiIndex, int>, double> fgrad;
    auto fval = [&](const MultiIndex& b) -> double {
      for (int c : b)
        if (c < 0) return 0.0;
      auto it = fdata.find(b);
      if (it == fdata.end()) it = fdata.emplace(b, val(rng)).first;
      return it->second;
    };
    auto fder = [&](const MultiIndex& b, int d) -> double {
      for (int c : b)
        if (c < 0) return 0.0;
      auto key = std::make_pair(b, d);
      auto it = fgrad.find(key);
      if (it == fgrad.end()) it = fgrad.emplace(key, val(rng)).first;
      return it->second;
    };
    Vec dudt(D);
    for (int d = 0; d < D; ++d) dudt(d) = val(rng);
    double dthetadt = val(rng);
    Vec dudt_rot = G * dudt;

    for (const MultiIndex& a : enumerate_indices(D, 4)) {
      if (grade(a) == 0) continue;
      int m = grade(a);
      double lhs_u = 0, lhs_th = 0, lhs_fx = 0;
      for (int d = 0; d < D; ++d) {
        lhs_u += dudt_rot(d) *
                 transform_value(G, shifted(a, d, -1), fval);
        lhs_th += dthetadt * transform_value(G, shifted(a, d, -2), fval);
        lhs_fx += transform_value(G, shifted(a, d, -1),
                                  [&](const MultiIndex& b) {
                                    double acc = 0;
                                    for (int j = 0; j < D; ++j)
                                      acc += G(d, j) * fder(b, j);
                                    return acc;
                                  });
      }
      double rhs_u = 0, rhs_th = 0, rhs_fx = 0;
      std::vector<int> theta = direction_digits(a);
      detail::for_each_digit_tuple(D, m, [&](const std::vector<int>& phi) {
        MultiIndex sig = digit_counts(phi, D);
        double weight = static_cast<double>(multi_factorial(sig)) /
                        multi_factorial(a) *
                        detail::digit_product(G, theta, phi);
        for (int d = 0; d < D; ++d) {
          rhs_u += weight * dudt(d) * fval(shifted(sig, d, -1));
          rhs_th += weight * dthetadt * fval(shifted(sig, d, -2));
          rhs_fx += weight * fder(shifted(sig, d, -1), d);
        }
      });
      CHECK(lhs_u == doctest::Approx(rhs_u).epsilon(1e-10));
      CHECK(lhs_th == doctest::Approx(rhs_th).epsilon(1e-10));
      CHECK(lhs_fx == doctest::Approx(rhs_fx).epsilon(1e-10));
    }
  }
}

TEST_CASE("negative grade transforms vanish") {
  Mat G = planar(0.3);
  MultiIndex a{1, 0};
  CHECK(transform_value(G, shifted(a, 0, -2), [](const MultiIndex&) {
          return 1.0;
        }) == 0.0);
}
