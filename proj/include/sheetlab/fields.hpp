#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sheetlab/surface.hpp"

namespace sheetlab {

/// Which side of the sheet a sample sits on. The sheet itself is represented
/// by the pair of one-sided samples (0, minus) and (0, plus).
enum class Side
{
  minus,
  plus,
  bulk,
};

struct GridPoint
{
  double x = 0.0;
  Side side = Side::bulk;
};

using Grid = std::vector<GridPoint>;

/// Envelopes of a c-number photon wavefunction f(x) = R(x) A_R(x) + L(x) A_L(x).
/// `right_env` and `left_env` hold R and L including their plane-wave phase.
/// `incident_*` record the amplitude of a uniform background wave (1 for the
/// scattering state) which is not produced by the sheet.
struct FieldProfile
{
  Grid grid;
  std::vector<cplx> right_env;
  std::vector<cplx> left_env;
  double k = 1.0;
  cplx incident_right{};
  cplx incident_left{};

  std::size_t size() const { return grid.size(); }
};

/// Coefficients of A_z = A_R + A_L (polar) and A_z^ax = A_R - A_L (axial):
/// polar = (R + L)/2, axial = (R - L)/2.
struct GaugeDecomposition
{
  Grid grid;
  std::vector<cplx> polar_env;
  std::vector<cplx> axial_env;
  double k = 1.0;
  cplx incident_right{};
  cplx incident_left{};
};

struct SurfaceAxial
{
  /// Mean of the sheet-generated axial coefficient over the 0- and 0+ samples.
  cplx value{};
  /// axial(0+) - axial(0-)
  cplx jump{};
};

struct Continuity
{
  bool continuous = false;
  /// total(0+) - total(0-), total = R + L
  cplx jump{};
};

/// Mirror-symmetric grid: `per_side` bulk points on each of (0, half_width],
/// plus the paired 0-/0+ samples.
Grid make_grid(double half_width, std::size_t per_side);

/// Throws InvalidArgument unless the grid is ordered and has exactly one 0- and one 0+ sample.
void validate_grid(const Grid& grid);

/// Scattering-state envelope. Throws ContinuityViolation if |1 + r - t| > 1e-10.
FieldProfile eval_a(cplx t, cplx r, const Grid& grid, double k = 1.0);

/// Emission-state envelope; any (b_r, b_l) is accepted.
FieldProfile eval_b(cplx b_r, cplx b_l, const Grid& grid, double k = 1.0);

Continuity continuity(const FieldProfile& profile, double tol = 1e-12);

GaugeDecomposition decompose(const FieldProfile& profile);

/// Inverse of decompose.
FieldProfile recombine(const GaugeDecomposition& dec);

SurfaceAxial axial_at_surface(const GaugeDecomposition& dec);

/// f(x) -> -f(-x), i.e. R'(x) = -L(-x), L'(x) = -R(-x).
/// Throws AsymmetricGrid if the grid is not mirror-symmetric about 0.
FieldProfile parity_transform(const FieldProfile& profile);

/// Columns: x, re_right, im_right, re_left, im_left, re_polar, im_polar,
/// re_axial, im_axial, side.
void write_profile_csv(std::ostream& os, const FieldProfile& profile);

}  // namespace sheetlab
