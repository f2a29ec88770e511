#pragma once

#include <complex>

namespace sheetlab {

using cplx = std::complex<double>;

/// Fine-structure constant (CODATA 2018).
inline constexpr double kFineStructure = 7.2973525693e-3;

/// Dimensionless sheet conductance of pristine graphene, pi * alpha.
inline constexpr double kGrapheneConductance = 3.14159265358979323846 * kFineStructure;

/// One conducting sheet.
///
/// `cond` is the sheet conductance in units of eps0*c, so a lossless sheet has
/// cond = 0 and graphene has cond = pi*alpha. `branching` is the fraction of
/// absorbed energy that keeps a pathway to light emission and `f_sign` fixes the
/// sign of the matter amplitude F.
struct SheetParams
{
  cplx cond{kGrapheneConductance, 0.0};
  double branching = 1.0;
  int f_sign = +1;

  /// Throws InvalidArgument if Re(cond) < 0, branching is outside [0, 1],
  /// or f_sign is not +1/-1.
  void validate() const;
};

struct ScatterCoeffs
{
  cplx t{1.0, 0.0};
  cplx r{0.0, 0.0};
};

/// Emission amplitudes of the emission state, natural units (eps0 = c = 1).
struct EmissionAmplitudes
{
  cplx b_r{};
  cplx b_l{};
  double f_mag = 0.0;
};

/// Closed form t = 2/(2 + cond), r = -cond/(2 + cond).
ScatterCoeffs solve_single_sheet(const SheetParams& params);

/// Same coefficients from the two boundary conditions
///   1 + r = t            (field continuity)
///   t - (1 - r) + cond*t = 0   (physical-state condition)
/// solved as a 2x2 linear system by LU. Used as an independent cross-check.
ScatterCoeffs solve_boundary_system(const SheetParams& params);

/// Absorbed fraction Re(cond)*|t|^2. For real cond the Poynting identity
/// 1 - |r|^2 - |t|^2 = A is checked and a NumericalError raised if it fails.
double absorbance(const ScatterCoeffs& coeffs, const SheetParams& params);

/// |F| = sqrt(2*branching*A), b_r = b_l = -f_sign*(|F|/2)*t.
EmissionAmplitudes emission_amplitude(const SheetParams& params, const ScatterCoeffs& coeffs);

}  // namespace sheetlab
