#pragma once

#include <utility>

#include <Eigen/Core>

#include "sheetlab/surface.hpp"

namespace sheetlab {

/// The scattering state |a> and emission state |b> reduced to the numbers that
/// the observables depend on: the scattering pair (t, r), the emission
/// amplitude b, the overlap <a|b> and the energy scale of the local Hamiltonian.
///
/// Both diagonal elements of the local Hamiltonian vanish identically; only
/// <b|H|a> = energy_unit * conj(b) * (t + r) survives.
struct TwoStateSystem
{
  ScatterCoeffs coeffs;
  cplx b{};
  cplx overlap{};
  double energy_unit = 1.0;

  void validate() const;
};

struct DecoupledPair
{
  double theta = 0.0;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  cplx reflection_plus{};
  cplx reflection_minus{};
};

struct PhasePair
{
  double theta_plus = 0.0;   // Re[e^{i theta} conj(t + r) b] > 0
  double theta_minus = 0.0;  // Re[e^{i theta} conj(t + r) b] < 0
};

struct LevelEnergies
{
  double e_plus = 0.0;
  double e_minus = 0.0;
};

struct CorrectedReflection
{
  cplx r_plus{};
  cplx r_minus{};
};

/// Basis change from {a, b} to {A = a, B = b - a <a|b>}.
struct OrthogonalBasis
{
  Eigen::Matrix2cd change;       // columns: new vectors in the old basis
  Eigen::Matrix2cd gram;         // <i|j> in the new basis
  Eigen::Matrix2cd hamiltonian;  // <i|H|j> in the new basis
};

/// Magnitudes below this count as zero for t + r and b.
inline constexpr double kDegenerateTol = 1e-14;

/// <b|H|a> = energy_unit * conj(b) * (t + r).
cplx offdiagonal(const TwoStateSystem& sys);

/// Phases making |a> +- e^{i theta}|b> non-mixing under H. Throws
/// DegenerateDecoupling when |t + r| or |b| is below kDegenerateTol.
PhasePair decoupling_phase(const TwoStateSystem& sys);

/// <Phi_theta^+-|H|Phi_theta^+-> = +-2 u Re[e^{i theta} conj(t + r) b].
LevelEnergies level_energies(const TwoStateSystem& sys, double theta);

/// <Phi_theta^+|H|Phi_theta^-> evaluated by explicit matrix algebra.
cplx cross_element(const TwoStateSystem& sys, double theta);

/// r +- ((t + r)/|t + r|) |b|. The minus branch belongs to the lower level.
CorrectedReflection corrected_reflection(const TwoStateSystem& sys);

/// Everything above bundled for the theta_plus branch.
DecoupledPair decouple(const TwoStateSystem& sys);

/// Matrix of elements <i|H|j> in the ordered basis {a, b}:
/// [[0, conj(h)], [h, 0]] with h = offdiagonal(sys). Eigenvalues are +-|h| and
/// the eigenvector (1, e^{i phi}) of +|h| has phi = theta_plus.
Eigen::Matrix2cd spin_matrix(const TwoStateSystem& sys);

/// spin_matrix plus a caller-supplied perturbation (for example sigma_x- or
/// sigma_z-like terms). The perturbation is not required to be traceless.
Eigen::Matrix2cd perturbed_matrix(const TwoStateSystem& sys, const Eigen::Matrix2cd& perturbation);

/// Gram-Schmidt step |B> = |b> - |a><a|b>. Throws InvalidArgument if |overlap| >= 1.
OrthogonalBasis orthogonalize(const TwoStateSystem& sys);

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double theta);

}  // namespace sheetlab
