#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sheetlab/error.hpp"
#include "sheetlab/twostate.hpp"
#include "test_support.hpp"

using namespace sheetlab;
using sheetlab::test::close;

namespace {

constexpr double kPi = std::numbers::pi;

// Graphene values (mpmath, 40 digits): t, r, b and derived quantities.
constexpr double kT = 0.988667248801598019256123598820682812011;
constexpr double kR = -0.01133275119840198074387640117931718798901;
constexpr double kB = -0.1046508833829850000207096510265301271065;
constexpr double kH = -0.1022789185348403016372089667386087577575;
constexpr double kE = 0.2045578370696806032744179334772175155151;
constexpr double kRMinus = -0.1159836345813869807645860522058473150955;
constexpr double kRPlus = 0.09331813218458301927683324984721293911745;

TwoStateSystem make(cplx t, cplx r, cplx b, cplx overlap = 0.0)
{
  TwoStateSystem s;
  s.coeffs = {t, r};
  s.b = b;
  s.overlap = overlap;
  return s;
}

TwoStateSystem graphene()
{
  return make(kT, kR, kB);
}

TwoStateSystem random_system()
{
  const cplx r = test::uniform_complex(1.0);
  return make(1.0 + r, r, test::uniform_complex(0.5));
}

}  // namespace

TEST_CASE("off-diagonal element")
{
  CHECK(offdiagonal(make(0.5, -0.5, 0.3)) == cplx(0.0));
  CHECK(offdiagonal(make(kT, kR, 0.0)) == cplx(0.0));
  CHECK(close(offdiagonal(graphene()), kH, 1e-15));

  TwoStateSystem s = graphene();
  s.energy_unit = 2.5;
  CHECK(close(offdiagonal(s), 2.5 * kH, 1e-14));

  SUBCASE("vanishes exactly when t + r = 0 or b = 0")
  {
    for (int i = 0; i < 200; ++i)
    {
      TwoStateSystem sys = random_system();
      REQUIRE(std::abs(offdiagonal(sys)) > 0.0);
      sys.b = 0.0;
      REQUIRE(offdiagonal(sys) == cplx(0.0));
      sys = random_system();
      sys.coeffs.r = -0.5;
      sys.coeffs.t = 0.5;
      REQUIRE(offdiagonal(sys) == cplx(0.0));
    }
  }
}

TEST_CASE("decoupling phase")
{
  SUBCASE("real negative b, real positive t + r")
  {
    const PhasePair p = decoupling_phase(graphene());
    CHECK(p.theta_plus == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(p.theta_minus == doctest::Approx(0.0));
  }
  SUBCASE("imaginary b")
  {
    // e^{i theta} = (t + r)/|t + r| * conj(b)/|b| = -i
    const PhasePair p = decoupling_phase(make(kT, kR, cplx(0.0, 0.1)));
    CHECK(p.theta_plus == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    CHECK(p.theta_minus == doctest::Approx(0.5 * kPi).epsilon(1e-15));
    const cplx sum = kT + kR;
    CHECK(std::real(std::polar(1.0, p.theta_plus) * std::conj(sum) * cplx(0.0, 0.1)) > 0.0);
  }
  SUBCASE("degenerate cases")
  {
    CHECK_THROWS_AS(decoupling_phase(make(0.5, -0.5, 0.1)), DegenerateDecoupling);
    CHECK_THROWS_AS(decoupling_phase(make(kT, kR, 0.0)), DegenerateDecoupling);
  }
  SUBCASE("random systems decouple")
  {
    for (int i = 0; i < 100; ++i)
    {
      const TwoStateSystem sys = random_system();
      const PhasePair p = decoupling_phase(sys);
      const cplx sum = sys.coeffs.t + sys.coeffs.r;
      for (double th : {p.theta_plus, p.theta_minus})
      {
        REQUIRE(th >= 0.0);
        REQUIRE(th < 2.0 * kPi);
        REQUIRE(std::abs(std::imag(std::polar(1.0, th) * std::conj(sum) * sys.b)) <= 1e-12);
        REQUIRE(std::abs(cross_element(sys, th)) <= 1e-12);
      }
      REQUIRE(std::real(std::polar(1.0, p.theta_plus) * std::conj(sum) * sys.b) > 0.0);
      REQUIRE(std::real(std::polar(1.0, p.theta_minus) * std::conj(sum) * sys.b) < 0.0);
    }
  }
}

TEST_CASE("level energies")
{
  CHECK(level_energies(make(kT, kR, 0.0), 1.234).e_plus == 0.0);
  CHECK(level_energies(make(0.5, -0.5, 0.2), 0.3).e_plus == 0.0);

  const TwoStateSystem g = graphene();
  const LevelEnergies e = level_energies(g, decoupling_phase(g).theta_plus);
  CHECK(e.e_plus == doctest::Approx(kE).epsilon(1e-14));
  CHECK(e.e_minus == doctest::Approx(-kE).epsilon(1e-14));

  for (int i = 0; i < 100; ++i)
  {
    TwoStateSystem sys = random_system();
    sys.energy_unit = test::uniform(0.1, 3.0);
    const PhasePair p = decoupling_phase(sys);
    const LevelEnergies lv = level_energies(sys, p.theta_plus);
    REQUIRE(lv.e_plus + lv.e_minus == 0.0);
    REQUIRE(lv.e_plus ==
            doctest::Approx(2.0 * sys.energy_unit * std::abs(sys.coeffs.t + sys.coeffs.r) * std::abs(sys.b)).epsilon(1e-12));
    // Direct expectation value <Phi|H|Phi> with |Phi> = (1, e^{i theta}).
    const Eigen::Vector2cd v(1.0, std::polar(1.0, p.theta_plus));
    REQUIRE(std::abs(v.dot(spin_matrix(sys) * v) - lv.e_plus) <= 1e-12);
    REQUIRE(level_energies(sys, p.theta_minus).e_plus == doctest::Approx(-lv.e_plus).epsilon(1e-12));
  }
}

TEST_CASE("corrected reflection")
{
  const CorrectedReflection none = corrected_reflection(make(kT, kR, 0.0));
  CHECK(none.r_plus == cplx(kR));
  CHECK(none.r_minus == cplx(kR));

  const CorrectedReflection g = corrected_reflection(graphene());
  CHECK(close(g.r_minus, kRMinus, 1e-15));
  CHECK(close(g.r_plus, kRPlus, 1e-15));

  CHECK_THROWS_AS(corrected_reflection(make(0.5, -0.5, 0.1)), DegenerateDecoupling);

  for (int i = 0; i < 100; ++i)
  {
    const TwoStateSystem sys = random_system();
    const CorrectedReflection c = corrected_reflection(sys);
    REQUIRE(close(0.5 * (c.r_plus + c.r_minus), sys.coeffs.r, 1e-15));
    // The branches are r +- e^{i theta} b.
    const PhasePair p = decoupling_phase(sys);
    REQUIRE(close(c.r_plus, sys.coeffs.r + std::polar(1.0, p.theta_plus) * sys.b, 1e-12));
    REQUIRE(close(c.r_minus, sys.coeffs.r - std::polar(1.0, p.theta_plus) * sys.b, 1e-12));
  }

  const DecoupledPair d = decouple(graphene());
  CHECK(d.energy_plus == -d.energy_minus);
  CHECK(close(d.reflection_minus, kRMinus, 1e-15));
}

TEST_CASE("spin matrix")
{
  CHECK(spin_matrix(make(kT, kR, 0.0)).isZero(0.0));

  for (int i = 0; i < 100; ++i)
  {
    const TwoStateSystem sys = i == 0 ? graphene() : random_system();
    const Eigen::Matrix2cd m = spin_matrix(sys);
    const double h = std::abs(offdiagonal(sys));
    REQUIRE(m(0, 0) == cplx(0.0));
    REQUIRE(m(1, 1) == cplx(0.0));
    REQUIRE(m.isApprox(m.adjoint()));

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
    REQUIRE(es.info() == Eigen::Success);
    REQUIRE(std::abs(es.eigenvalues()(0) + h) <= 1e-12);
    REQUIRE(std::abs(es.eigenvalues()(1) - h) <= 1e-12);
    if (i == 0)
      CHECK(es.eigenvalues()(1) == doctest::Approx(-kH).epsilon(1e-14));

    // Upper eigenvector (1, e^{i phi}) reproduces theta_plus up to a global phase.
    const Eigen::Vector2cd v = es.eigenvectors().col(1);
    const double phi = wrap_phase(std::arg(v(1)) - std::arg(v(0)));
    const double theta = decoupling_phase(sys).theta_plus;
    REQUIRE(std::abs(std::polar(1.0, phi) - std::polar(1.0, theta)) <= 1e-10);
  }
}

TEST_CASE("perturbation addend")
{
  Eigen::Matrix2cd sz;
  sz << 1.0, 0.0, 0.0, -1.0;
  const Eigen::Matrix2cd m = perturbed_matrix(make(kT, kR, 0.0), 0.01 * sz);
  CHECK(m(0, 0) == cplx(0.01));
  CHECK(m(1, 1) == cplx(-0.01));
  CHECK(m(0, 1) == cplx(0.0));
}

TEST_CASE("orthogonalized basis")
{
  SUBCASE("zero overlap is the identity change")
  {
    const OrthogonalBasis ob = orthogonalize(graphene());
    CHECK(ob.change.isIdentity(0.0));
    CHECK(ob.gram.isIdentity(0.0));
  }
  SUBCASE("overlap 0.1")
  {
    const OrthogonalBasis ob = orthogonalize(make(kT, kR, kB, 0.1));
    CHECK(std::abs(ob.gram(0, 1)) <= 1e-12);
    CHECK(std::abs(ob.gram(1, 0)) <= 1e-12);
    CHECK(ob.gram(1, 1).real() == doctest::Approx(0.99));

    // Independent check with explicit vectors realizing <a|b> = 0.1.
    const Eigen::Vector2cd a(1.0, 0.0);
    const Eigen::Vector2cd b(0.1, std::sqrt(1.0 - 0.01));
    REQUIRE(std::abs(a.dot(b) - 0.1) < 1e-15);
    const Eigen::Vector2cd big_b = b - a * a.dot(b);
    const Eigen::Vector2cd from_change = ob.change(0, 1) * a + ob.change(1, 1) * b;
    CHECK((big_b - from_change).norm() <= 1e-15);
    CHECK(std::abs(a.dot(from_change)) <= 1e-12);
  }
  SUBCASE("decoupled system stays decoupled")
  {
    const OrthogonalBasis ob = orthogonalize(make(0.5, -0.5, 0.2, 0.1));
    CHECK(std::abs(ob.hamiltonian(0, 1)) <= 1e-12);
    CHECK(std::abs(ob.hamiltonian(1, 0)) <= 1e-12);
  }
  SUBCASE("complex overlap")
  {
    for (int i = 0; i < 50; ++i)
    {
      cplx s = test::uniform_complex(0.6);
      const OrthogonalBasis ob = orthogonalize(make(kT, kR, kB, s));
      REQUIRE(std::abs(ob.gram(0, 1)) <= 1e-12);
      REQUIRE(ob.gram(1, 1).real() == doctest::Approx(1.0 - std::norm(s)).epsilon(1e-12));
    }
  }
  SUBCASE("overlap must stay below one")
  {
    CHECK_THROWS_AS(orthogonalize(make(kT, kR, kB, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(orthogonalize(make(kT, kR, kB, cplx(0.8, 0.8))), InvalidArgument);
  }
}

TEST_CASE("phase wrapping")
{
  CHECK(wrap_phase(-kPi / 2) == doctest::Approx(1.5 * kPi));
  CHECK(wrap_phase(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_phase(-1e-18) < 2.0 * kPi);
  CHECK(wrap_phase(7.0 * kPi) == doctest::Approx(kPi));
}
