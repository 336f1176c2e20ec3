#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypermoment/assembly.hpp"
#include "hypermoment/waves.hpp"

using namespace hypermoment;
using Vec = DenseVector<double>;

namespace {

MomentState<double> sample(int D, int M, unsigned seed, double scale = 0.08) {
  std::mt19937_64 rng(seed);
  return random_state<double>(D, M, rng, scale);
}

double eigenvalue_of_w(int D, const Vec& w, double C) {
  const auto& table = index_table(D, 3);
  double rho = w(0);
  double trace = 0;
  for (int d = 0; d < D; ++d)
    trace += w(static_cast<int>(table.position(shifted(MultiIndex(D, 0), d, 2))));
  double theta = 2.0 * trace / (D * rho);
  return w(1) + C * std::sqrt(theta);
}

CharacteristicField<double> find_field(int D, int M, int ordinal,
                                       int root_index) {
  for (const auto& f : enumerate_fields<double>(D, M))
    if (f.wave_class.ordinal == ordinal && f.root_index == root_index) return f;
  throw std::runtime_error("no such field");
}

int fslot(int D, const MultiIndex& a) { return ordinal(a) - D - 2; }

}  // namespace

TEST_CASE("field classification for the smallest planar system") {
  auto fields = enumerate_fields<double>(2, 3);
  REQUIRE(fields.size() == 10);
  int gnl = 0;
  for (const auto& f : fields)
    if (f.nature == FieldNature::genuinely_nonlinear) ++gnl;
  CHECK(gnl == 6);
  for (const auto& f : fields) {
    bool expect_gnl =
        (f.wave_class.ordinal == 1 ||
         is_transverse_pressure_class(f.wave_class.hat)) &&
        std::abs(f.root) > 1e-12;
    CHECK((f.nature == FieldNature::genuinely_nonlinear) == expect_gnl);
  }
  auto sonic = wave_classes(2, 3)[0];
  CHECK_THROWS_AS(classify_field(2, 3, sonic, 0.123), ValidationError);
}

TEST_CASE("zero roots of odd degree factors are linearly degenerate") {
  auto fields = enumerate_fields<double>(2, 4);
  for (const auto& f : fields) {
    if (std::abs(f.root) > 1e-12) continue;
    CHECK(f.nature == FieldNature::linearly_degenerate);
  }
}

TEST_CASE("eigenvalue derivative closed forms") {
  for (int D : {1, 2, 3})
    for (int M : {3, 4}) {
      auto s = sample(D, M, 50 + 10 * D + M);
      double root_theta = std::sqrt(s.theta);
      for (const auto& f : enumerate_fields<double>(D, M)) {
        double got = eigenvalue_derivative(s, f);
        double C = f.root;
        double expect = 0;
        if (f.wave_class.ordinal == 1)
          expect = root_theta * C / 2 * (2 * D - 1 + C * C) / D;
        else if (is_transverse_pressure_class(f.wave_class.hat))
          expect = root_theta * C / D;
        CHECK(got == doctest::Approx(expect).epsilon(1e-10));
        if (f.nature == FieldNature::linearly_degenerate)
          CHECK(std::abs(got) <= 1e-12 * (1 + root_theta));
      }
    }
}

TEST_CASE("eigenvalue derivative matches finite differences") {
  for (int M : {3, 4})
    for (unsigned seed = 0; seed < 3; ++seed) {
      auto s = sample(2, M, 300 + 10 * M + seed);
      Vec w0 = to_w_vector(s);
      for (const auto& f : enumerate_fields<double>(2, M)) {
        Vec r = analytic_eigenvector(s, f.wave_class.hat, f.root_index);
        auto probe = [&](double eps) {
          return (eigenvalue_of_w(2, Vec(w0 + eps * r), f.root) -
                  eigenvalue_of_w(2, Vec(w0 - eps * r), f.root)) /
                 (2 * eps);
        };
        double e = 1e-5;
        double refined = (4 * probe(e) - probe(2 * e)) / 3;
        double expect = eigenvalue_derivative(s, f);
        double scale = std::max(1.0, std::sqrt(s.theta));
        if (f.nature == FieldNature::linearly_degenerate)
          CHECK(std::abs(refined) <= 1e-6 * scale);
        else
          CHECK(refined == doctest::Approx(expect).epsilon(1e-6));
      }
    }
}

TEST_CASE("rarefaction curve origin and growth laws") {
  auto s = sample(2, 3, 77);
  double C = hermite_roots<double>(4).back();
  auto origin = rarefaction_curve_closed(s, RarefactionFamily::acoustic, C, 0.0);
  CHECK(origin.rho == s.rho);
  CHECK(origin.theta == s.theta);
  CHECK(origin.u(0) == s.u(0));
  CHECK(origin.p == pressure(s));
  CHECK(origin.p2e1 == pressure_component(s, 0, 0));

  auto tip = rarefaction_curve_closed(s, RarefactionFamily::acoustic, C, 1.0);
  CHECK(tip.rho == doctest::Approx(s.rho * std::exp(1.0)).epsilon(1e-14));
  double gamma = (1 + C * C) / 2;
  CHECK(tip.p ==
        doctest::Approx(pressure(s) * std::exp(gamma)).epsilon(1e-13));

  double Ct = hermite_roots<double>(2).back();
  auto side =
      rarefaction_curve_closed(s, RarefactionFamily::transverse_pressure, Ct, 1.0);
  CHECK(side.rho == s.rho);
  CHECK(side.p == doctest::Approx(pressure(s) * std::exp(1.0)).epsilon(1e-14));
  CHECK(side.p2e1 == pressure_component(s, 0, 0));
  CHECK((side.u - s.u).norm() == 0.0);

  CHECK_THROWS_AS(
      rarefaction_curve_closed(s, RarefactionFamily::acoustic, 0.99 * C, 1.0),
      ValidationError);
}

TEST_CASE("integral curves follow the closed forms") {
  for (int M : {3, 4}) {
    auto s = sample(2, M, 400 + M);
    for (int root_index : {1, M + 1}) {
      auto f = find_field(2, M, 1, root_index);
      for (double zeta : {-0.3, 1e-3, 0.25}) {
        auto full = integral_curve(s, f, zeta);
        auto part =
            rarefaction_curve_closed(s, RarefactionFamily::acoustic, f.root, zeta);
        CHECK(full.rho == doctest::Approx(part.rho).epsilon(1e-8));
        CHECK(full.theta == doctest::Approx(part.theta).epsilon(1e-8));
        CHECK(full.u(0) == doctest::Approx(part.u(0)).epsilon(1e-8));
        CHECK(full.u(1) == doctest::Approx(s.u(1)).epsilon(1e-8));
        CHECK(pressure(full) == doctest::Approx(part.p).epsilon(1e-8));
        CHECK(pressure_component(full, 0, 0) ==
              doctest::Approx(part.p2e1).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("transverse pressure curves freeze density and axis pressure") {
  auto s = sample(2, 3, 430);
  auto f = find_field(2, 3, 3, 2);
  REQUIRE(f.nature == FieldNature::genuinely_nonlinear);
  auto full = integral_curve(s, f, 0.4);
  auto part = rarefaction_curve_closed(s, RarefactionFamily::transverse_pressure,
                                       f.root, 0.4);
  CHECK(full.rho == doctest::Approx(s.rho).epsilon(1e-10));
  CHECK((full.u - s.u).norm() <= 1e-9);
  CHECK(pressure(full) == doctest::Approx(part.p).epsilon(1e-8));
  CHECK(pressure_component(full, 0, 0) ==
        doctest::Approx(pressure_component(s, 0, 0)).epsilon(1e-9));
}

TEST_CASE("eigenvalue is monotone along genuinely nonlinear curves") {
  auto s = sample(2, 3, 440);
  for (int root_index : {1, 4}) {
    auto f = find_field(2, 3, 1, root_index);
    double prev = field_eigenvalue(s, f);
    double dir = f.root > 0 ? 1.0 : -1.0;
    for (double zeta : {0.1, 0.2, 0.3}) {
      auto state = integral_curve(s, f, dir * zeta);
      double cur = field_eigenvalue(state, f);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("linearly degenerate curves keep their eigenvalue") {
  auto s = sample(2, 3, 450);
  auto f = find_field(2, 3, 2, 3);
  REQUIRE(f.nature == FieldNature::linearly_degenerate);
  double lam0 = field_eigenvalue(s, f);
  auto state = integral_curve(s, f, 0.5);
  CHECK(field_eigenvalue(state, f) == doctest::Approx(lam0).epsilon(1e-9));
  auto report = contact_invariants(s, state, f);
  CHECK(report.invariants_hold);
}

TEST_CASE("curves that leave the representable admissible set report the exit") {
  Vec u = Vec::Zero(2);
  auto s = maxwellian<double>(2, 3, 1.0, u, 1e300);
  auto f = find_field(2, 3, 1, 4);
  REQUIRE(f.root > 0);
  CHECK_THROWS_AS(integral_curve(s, f, 30.0), NumericError);
}

TEST_CASE("contact invariant case analysis") {
  auto s = sample(2, 3, 500);
  auto ld = find_field(2, 3, 2, 3);

  auto shear = s;
  shear.u(1) += 0.3;
  auto rep = contact_invariants(s, shear, ld);
  CHECK(rep.invariants_hold);

  auto heated = s;
  heated.f(fslot(2, MultiIndex{1, 2})) += 0.05;
  rep = contact_invariants(s, heated, ld);
  CHECK(rep.invariants_hold);

  auto pushed = s;
  pushed.u(0) += 0.1;
  rep = contact_invariants(s, pushed, ld);
  CHECK(!rep.invariants_hold);

  auto gnl = find_field(2, 3, 1, 4);
  CHECK_THROWS_AS(contact_invariants(s, shear, gnl), ValidationError);

  auto zero = find_field(2, 4, 1, 3);
  REQUIRE(std::abs(zero.root) <= 1e-12);
  auto s4 = sample(2, 4, 501);
  auto pressed = s4;
  pressed.theta *= 1.2;
  rep = contact_invariants(s4, pressed, zero);
  CHECK(rep.invariants_hold);
  CHECK(std::abs(rep.p_jump) > 1e-3);
}

TEST_CASE("shock speed from the mass jump") {
  Vec uL(2), uR(2);
  uL << 1.0, 0.0;
  uR << 0.0, 0.0;
  auto L = maxwellian<double>(2, 3, 2.0, uL, 1.0);
  auto R = maxwellian<double>(2, 3, 1.0, uR, 1.0);
  CHECK(shock_speed(L, R) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(shock_speed(R, L) == doctest::Approx(2.0).epsilon(1e-14));
  Vec uc(2);
  uc << 0.7, 0.1;
  auto Lc = maxwellian<double>(2, 3, 1.5, uc, 1.0);
  auto Rc = maxwellian<double>(2, 3, 0.5, uc, 2.0);
  CHECK(shock_speed(Lc, Rc) == doctest::Approx(0.7).epsilon(1e-13));
  auto Re = maxwellian<double>(2, 3, 1.5, uL, 1.0);
  CHECK_THROWS_AS(shock_speed(Lc, Re), ValidationError);
}

TEST_CASE("jump residuals vanish for identical states") {
  auto s = sample(2, 3, 520);
  auto rep = shock_residuals(s, s, 1.7);
  CHECK(rep.jump_residuals.cwiseAbs().maxCoeff() == 0.0);
  CHECK(rep.identity_residual == 0.0);
  auto f = find_field(2, 3, 1, 4);
  CHECK(!entropy_condition(s, s, field_eigenvalue(s, f), f));
}

TEST_CASE("constructed jump pairs satisfy the density pressure relation") {
  std::mt19937_64 rng(999);
  std::uniform_real_distribution<double> shift(-0.02, 0.02);
  for (unsigned trial = 0; trial < 10; ++trial) {
    auto L = sample(2, 3, 530 + trial);
    double rhoR = L.rho * (1.05 + 0.3 * std::abs(shift(rng)));
    double u1R = L.u(0) + shift(rng);
    double S = (L.rho * L.u(0) - rhoR * u1R) / (L.rho - rhoR);
    double p2e1L = pressure_component(L, 0, 0);
    double p2e1R = p2e1L + L.rho * L.u(0) * L.u(0) - rhoR * u1R * u1R -
                   S * (L.rho * L.u(0) - rhoR * u1R);

    Vec uR = L.u;
    uR(0) = u1R;
    auto R = maxwellian<double>(2, 3, rhoR, uR, L.theta);
    R.f(fslot(2, MultiIndex{2, 0})) = (p2e1R - rhoR * L.theta) / 2;
    R.f(fslot(2, MultiIndex{0, 2})) = -(p2e1R - rhoR * L.theta) / 2;

    auto rep = shock_residuals(L, R, S);
    double scale = rep.scale;
    CHECK(std::abs(rep.identity_residual) <= 1e-10 * scale);
    CHECK(std::abs(rep.jump_residuals(0)) <= 1e-12 * scale);
    CHECK(std::abs(rep.jump_residuals(1)) <= 1e-12 * scale);
  }
}

TEST_CASE("equal density jumps force matching velocity") {
  auto L = sample(2, 3, 560);
  auto R = L;
  R.u(0) += 0.2;
  auto rep = shock_residuals(L, R, 0.0);
  CHECK(std::abs(rep.jump_residuals(0)) ==
        doctest::Approx(L.rho * 0.2).epsilon(1e-12));
  for (double S : {-1.0, 0.5, 3.0})
    CHECK(std::abs(shock_residuals(L, R, S).jump_residuals(0)) ==
          doctest::Approx(L.rho * 0.2).epsilon(1e-12));
}

TEST_CASE("wave table classifies curve endpoints") {
  auto s = sample(2, 3, 600);

  auto f_pos = find_field(2, 3, 1, 4);
  auto right = integral_curve(s, f_pos, 0.5);
  auto wave = classify_elementary_wave(s, right, f_pos);
  CHECK(wave.type == WaveType::rarefaction);
  CHECK(pressure(s) < pressure(right));
  CHECK(wave.speed_left < wave.speed_right);
  CHECK(wave.residual <= 1e-8);

  auto f_neg = find_field(2, 3, 1, 1);
  auto right_neg = integral_curve(s, f_neg, -0.5);
  wave = classify_elementary_wave(s, right_neg, f_neg);
  CHECK(wave.type == WaveType::rarefaction);
  CHECK(pressure(s) > pressure(right_neg));

  auto f_side = find_field(2, 3, 3, 2);
  auto side = integral_curve(s, f_side, 0.35);
  wave = classify_elementary_wave(s, side, f_side);
  CHECK(wave.type == WaveType::rarefaction);
  CHECK(wave.residual <= 1e-8);
}

TEST_CASE("wave table classifies shocks and contacts") {
  auto L = sample(2, 3, 620);
  auto f = find_field(2, 3, 1, 4);

  auto R = L;
  R.u(0) -= 0.4;
  R.rho *= 1.3;
  auto wave = classify_elementary_wave(L, R, f);
  CHECK(wave.type == WaveType::shock);
  CHECK(wave.speed_left == doctest::Approx(shock_speed(L, R)).epsilon(1e-12));

  auto shear = L;
  shear.u(1) += 0.25;
  wave = classify_elementary_wave(L, shear, find_field(2, 3, 2, 3));
  CHECK(wave.type == WaveType::contact);
  CHECK(wave.speed_left ==
        doctest::Approx(L.u(0) + std::sqrt(3.0 * L.theta)).epsilon(1e-12));

  auto junk = L;
  junk.u(0) += 0.3;
  junk.theta *= 0.7;
  wave = classify_elementary_wave(L, junk, find_field(2, 3, 2, 3));
  CHECK(wave.type == WaveType::unclassified);
}
