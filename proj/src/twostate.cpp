#include "sheetlab/twostate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sheetlab/error.hpp"

namespace sheetlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCrossTol = 1e-12;

// Gram matrix <i|j> in {a, b}; both states carry unit norm.
Eigen::Matrix2cd gram_matrix(const TwoStateSystem& sys)
{
  Eigen::Matrix2cd g;
  g << 1.0, sys.overlap,
       std::conj(sys.overlap), 1.0;
  return g;
}

}  // namespace

void TwoStateSystem::validate() const
{
  if (!(std::abs(overlap) < 1.0))
    throw InvalidArgument("|<a|b>| must be < 1, got " + std::to_string(std::abs(overlap)));
  if (!(energy_unit > 0.0) || !std::isfinite(energy_unit))
    throw InvalidArgument("energy_unit must be positive and finite");
}

double wrap_phase(double theta)
{
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0)
    w += kTwoPi;
  // fmod can return exactly 2 pi after the shift for tiny negative inputs
  if (w >= kTwoPi)
    w = 0.0;
  return w;
}

cplx offdiagonal(const TwoStateSystem& sys)
{
  sys.validate();
  return sys.energy_unit * std::conj(sys.b) * (sys.coeffs.t + sys.coeffs.r);
}

cplx cross_element(const TwoStateSystem& sys, double theta)
{
  const Eigen::Matrix2cd h = spin_matrix(sys);
  const cplx phase = std::polar(1.0, theta);
  const Eigen::Vector2cd plus(1.0, phase);
  const Eigen::Vector2cd minus(1.0, -phase);
  return plus.dot(h * minus);  // dot() conjugates the left operand
}

PhasePair decoupling_phase(const TwoStateSystem& sys)
{
  sys.validate();
  const cplx sum = sys.coeffs.t + sys.coeffs.r;
  if (std::abs(sum) < kDegenerateTol)
    throw DegenerateDecoupling("t + r vanishes: every phase decouples the two states");
  if (std::abs(sys.b) < kDegenerateTol)
    throw DegenerateDecoupling("emission amplitude vanishes: every phase decouples the two states");

  // e^{i theta_plus} = (t + r)/|t + r| * conj(b)/|b|
  const double theta_plus = wrap_phase(std::arg(sum) - std::arg(sys.b));
  PhasePair out{theta_plus, wrap_phase(theta_plus + std::numbers::pi)};

  const double scale = sys.energy_unit * std::abs(sum) * std::abs(sys.b);
  for (double th : {out.theta_plus, out.theta_minus})
  {
    if (std::abs(cross_element(sys, th)) > kCrossTol * std::max(1.0, scale))
      throw NumericalError("decoupling phase failed to cancel the cross element");
  }
  return out;
}

LevelEnergies level_energies(const TwoStateSystem& sys, double theta)
{
  sys.validate();
  const cplx sum = sys.coeffs.t + sys.coeffs.r;
  const double e = 2.0 * sys.energy_unit * std::real(std::polar(1.0, theta) * std::conj(sum) * sys.b);
  return {e, -e};
}

CorrectedReflection corrected_reflection(const TwoStateSystem& sys)
{
  sys.validate();
  const cplx sum = sys.coeffs.t + sys.coeffs.r;
  if (std::abs(sum) < kDegenerateTol)
    throw DegenerateDecoupling("t + r vanishes: the corrected reflection has no preferred branch");
  const cplx shift = (sum / std::abs(sum)) * std::abs(sys.b);
  return {sys.coeffs.r + shift, sys.coeffs.r - shift};
}

DecoupledPair decouple(const TwoStateSystem& sys)
{
  const PhasePair phases = decoupling_phase(sys);
  const LevelEnergies energies = level_energies(sys, phases.theta_plus);
  const CorrectedReflection refl = corrected_reflection(sys);
  return {phases.theta_plus, energies.e_plus, energies.e_minus, refl.r_plus, refl.r_minus};
}

Eigen::Matrix2cd spin_matrix(const TwoStateSystem& sys)
{
  const cplx h = offdiagonal(sys);
  Eigen::Matrix2cd m;
  m << 0.0, std::conj(h),
       h, 0.0;
  return m;
}

Eigen::Matrix2cd perturbed_matrix(const TwoStateSystem& sys, const Eigen::Matrix2cd& perturbation)
{
  return spin_matrix(sys) + perturbation;
}

OrthogonalBasis orthogonalize(const TwoStateSystem& sys)
{
  sys.validate();
  OrthogonalBasis out;
  out.change << 1.0, -sys.overlap,
                0.0, 1.0;
  const Eigen::Matrix2cd adj = out.change.adjoint();
  out.gram = adj * gram_matrix(sys) * out.change;
  out.hamiltonian = adj * spin_matrix(sys) * out.change;
  return out;
}

}  // namespace sheetlab
