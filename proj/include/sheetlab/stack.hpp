#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sheetlab/surface.hpp"

namespace sheetlab {

// Transfer matrices act on the pair (A, B) of right- and left-moving E-field
// amplitudes and map the left side of an element to its right side:
//
//   (A_right, B_right)^T = M * (A_left, B_left)^T
//
// A stack matrix is the product M_n * ... * M_1 of its elements in the order
// light meets them. The total field at any plane is E = A + B.
using TransferMatrix = Eigen::Matrix2cd;

/// A conducting sheet together with its emission branch (+1 upper, -1 lower).
struct Sheet
{
  SheetParams params;
  int sign = -1;
};

/// Homogeneous slab; thickness `d` in units of the reference vacuum wavelength.
struct Slab
{
  cplx n{1.0, 0.0};
  double d = 0.0;
};

using Layer = std::variant<Sheet, Slab>;

struct LayerStack
{
  cplx ambient_in{1.0, 0.0};
  std::vector<Layer> layers;
  cplx ambient_out{1.0, 0.0};

  void validate() const;
  std::size_t sheet_count() const;
};

struct StackCoeffs
{
  ScatterCoeffs coeffs;
  /// 1 - |r|^2 - (Re n_out / Re n_in)|t|^2
  double absorbance = 0.0;
};

/// Field at one sheet inside a stack, normalized to a unit incident amplitude.
struct LocalField
{
  std::size_t layer_index = 0;
  cplx field{};
  /// One-way optical phase 2*pi*sum(Re(n) d)/scale from the front surface.
  double phase = 0.0;
  /// Re(cond)|field|^2 / Re(n_in)
  double absorbed = 0.0;
};

struct EmissionEntry
{
  cplx b{};
  double theta = 0.0;
  int sign = -1;
};

struct EmissionLedger
{
  std::vector<EmissionEntry> entries;
};

struct EmissionReflectance
{
  double reflectance = 0.0;  // clamped to [0, 1]
  double raw = 0.0;          // |r_N + sum_j e^{i theta_j} b_j|^2 before clamping
  bool clamped = false;
  cplx amplitude{};
  cplx r_stack{};
  EmissionLedger ledger;
};

struct DecouplingLayers
{
  double n_exact = 0.0;
  long n_int = 1;
  double residual = 0.0;
};

/// Sheet in vacuum: [[1 - g/2, -g/2], [g/2, 1 + g/2]] with g = cond.
TransferMatrix sheet_matrix(const SheetParams& params);

/// Sheet embedded in a medium of index n_medium (g = cond / n_medium).
TransferMatrix sheet_matrix(const SheetParams& params, cplx n_medium);

/// diag(e^{i phi}, e^{-i phi}), phi = 2 pi n d / wavelength_scale.
TransferMatrix propagation_matrix(cplx n, double d, double wavelength_scale = 1.0);

/// Index step from n1 to n2 at normal incidence.
TransferMatrix interface_matrix(cplx n1, cplx n2);

/// Ordered product of all element matrices of the stack.
TransferMatrix stack_matrix(const LayerStack& stack, double wavelength_scale = 1.0);

/// (t, r) for a matrix with no wave entering from the exit side.
ScatterCoeffs extract_coeffs(const TransferMatrix& m);

StackCoeffs stack_coeffs(const LayerStack& stack, double wavelength_scale = 1.0);

/// Closed form for N coincident sheets: cond -> N * cond.
ScatterCoeffs nlayer_replacement(long n_layers, cplx cond);

DecouplingLayers decoupling_layer_number(double cond);

/// Total field at every Sheet of the stack, in stack order.
std::vector<LocalField> local_fields(const LayerStack& stack, double wavelength_scale = 1.0);

/// Ledger with one entry per sheet, signs copied from the stack.
EmissionLedger make_ledger(const LayerStack& stack);

/// R_N = |r_N + sum_j e^{i theta_j} b_j|^2 with the sign of every entry taken
/// from `ledger`; b_j and theta_j are filled in on the returned ledger.
EmissionReflectance reflectance_with_emission(const LayerStack& stack, const EmissionLedger& ledger,
                                              double wavelength_scale = 1.0);

/// Stack of `count` identical sheets with no spacing.
LayerStack uniform_sheets(long count, const Sheet& sheet);

/// `count` identical sheets followed by the layers of `substrate`.
LayerStack sheets_on(const LayerStack& substrate, long count, const Sheet& sheet);

}  // namespace sheetlab
