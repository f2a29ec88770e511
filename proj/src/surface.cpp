#include "sheetlab/surface.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sheetlab/error.hpp"

namespace sheetlab {

namespace {

constexpr double kConservationTol = 1e-12;

}  // namespace

void SheetParams::validate() const
{
  if (!std::isfinite(cond.real()) || !std::isfinite(cond.imag()))
    throw InvalidArgument("sheet conductance must be finite");
  if (cond.real() < 0.0)
    throw InvalidArgument("sheet conductance has negative real part (gain sheets are not supported)");
  if (!(branching >= 0.0 && branching <= 1.0))
    throw InvalidArgument("branching ratio must lie in [0, 1], got " + std::to_string(branching));
  if (f_sign != 1 && f_sign != -1)
    throw InvalidArgument("f_sign must be +1 or -1, got " + std::to_string(f_sign));
}

ScatterCoeffs solve_single_sheet(const SheetParams& params)
{
  params.validate();
  const cplx denom = 2.0 + params.cond;
  return {2.0 / denom, -params.cond / denom};
}

ScatterCoeffs solve_boundary_system(const SheetParams& params)
{
  params.validate();
  // Unknowns (t, r):
  //   t - r           = 1
  //   (1 + cond) t + r = 1
  Eigen::Matrix2cd a;
  a << 1.0, -1.0,
       1.0 + params.cond, 1.0;
  const Eigen::Vector2cd rhs(1.0, 1.0);

  Eigen::FullPivLU<Eigen::Matrix2cd> lu(a);
  if (!lu.isInvertible())
    throw NumericalError("internal error: singular sheet boundary system");
  const Eigen::Vector2cd x = lu.solve(rhs);
  return {x(0), x(1)};
}

double absorbance(const ScatterCoeffs& coeffs, const SheetParams& params)
{
  params.validate();
  const double a = params.cond.real() * std::norm(coeffs.t);
  if (params.cond.imag() == 0.0)
  {
    const double balance = 1.0 - std::norm(coeffs.r) - std::norm(coeffs.t);
    if (std::abs(balance - a) > kConservationTol)
      throw NumericalError("energy balance violated: 1 - |r|^2 - |t|^2 = " + std::to_string(balance) +
                           " but cond*|t|^2 = " + std::to_string(a));
  }
  return a;
}

EmissionAmplitudes emission_amplitude(const SheetParams& params, const ScatterCoeffs& coeffs)
{
  const double a = absorbance(coeffs, params);
  EmissionAmplitudes out;
  out.f_mag = std::sqrt(2.0 * params.branching * a);
  out.b_r = -static_cast<double>(params.f_sign) * (out.f_mag / 2.0) * coeffs.t;
  out.b_l = out.b_r;
  return out;
}

}  // namespace sheetlab
