#include "sheetlab/stack.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sheetlab/error.hpp"
#include "sheetlab/twostate.hpp"

namespace sheetlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularTol = 1e-300;

void check_scale(double wavelength_scale)
{
  if (!(wavelength_scale > 0.0) || !std::isfinite(wavelength_scale))
    throw InvalidArgument("wavelength scale must be positive and finite");
}

// Walks the stack element by element. `on_sheet` sees the amplitude pair just
// before each sheet together with the accumulated one-way phase.
template <typename OnSheet>
TransferMatrix walk(const LayerStack& stack, double wavelength_scale, OnSheet&& on_sheet)
{
  TransferMatrix total = TransferMatrix::Identity();
  cplx n_cur = stack.ambient_in;
  double phase = 0.0;
  for (std::size_t i = 0; i < stack.layers.size(); ++i)
  {
    if (const auto* sheet = std::get_if<Sheet>(&stack.layers[i]))
    {
      on_sheet(i, *sheet, n_cur, total, phase);
      total = sheet_matrix(sheet->params, n_cur) * total;
    }
    else
    {
      const auto& slab = std::get<Slab>(stack.layers[i]);
      total = propagation_matrix(slab.n, slab.d, wavelength_scale) * interface_matrix(n_cur, slab.n) * total;
      phase += kTwoPi * slab.n.real() * slab.d / wavelength_scale;
      n_cur = slab.n;
    }
  }
  return interface_matrix(n_cur, stack.ambient_out) * total;
}

}  // namespace

void LayerStack::validate() const
{
  if (!(ambient_in.real() > 0.0) || !(ambient_out.real() > 0.0))
    throw InvalidArgument("ambient refractive indices need a positive real part");
  for (const Layer& layer : layers)
  {
    if (const auto* sheet = std::get_if<Sheet>(&layer))
    {
      sheet->params.validate();
      if (sheet->sign != 1 && sheet->sign != -1)
        throw InvalidArgument("sheet emission sign must be +1 or -1");
    }
    else
    {
      const auto& slab = std::get<Slab>(layer);
      if (!(slab.d >= 0.0) || !std::isfinite(slab.d))
        throw InvalidArgument("slab thickness must be finite and non-negative");
      if (slab.n.imag() < 0.0)
        throw InvalidArgument("slab index has negative imaginary part (gain media are not supported)");
      if (!(slab.n.real() > 0.0))
        throw InvalidArgument("slab index needs a positive real part");
    }
  }
}

std::size_t LayerStack::sheet_count() const
{
  std::size_t n = 0;
  for (const Layer& layer : layers)
    n += std::holds_alternative<Sheet>(layer) ? 1 : 0;
  return n;
}

TransferMatrix sheet_matrix(const SheetParams& params)
{
  return sheet_matrix(params, cplx{1.0, 0.0});
}

TransferMatrix sheet_matrix(const SheetParams& params, cplx n_medium)
{
  params.validate();
  // E continuous, n(A - B) jumps by -cond * E.
  const cplx h = params.cond / (2.0 * n_medium);
  TransferMatrix m;
  m << 1.0 - h, -h,
       h, 1.0 + h;
  return m;
}

TransferMatrix propagation_matrix(cplx n, double d, double wavelength_scale)
{
  check_scale(wavelength_scale);
  if (!(d >= 0.0))
    throw InvalidArgument("propagation distance must be non-negative");
  const cplx phi = kTwoPi * n * d / wavelength_scale;
  const cplx i{0.0, 1.0};
  TransferMatrix m = TransferMatrix::Zero();
  m(0, 0) = std::exp(i * phi);
  m(1, 1) = std::exp(-i * phi);
  return m;
}

TransferMatrix interface_matrix(cplx n1, cplx n2)
{
  if (!(n1.real() > 0.0) || !(n2.real() > 0.0))
    throw InvalidArgument("interface indices need a positive real part");
  TransferMatrix m;
  m << n2 + n1, n2 - n1,
       n2 - n1, n2 + n1;
  return m / (2.0 * n2);
}

TransferMatrix stack_matrix(const LayerStack& stack, double wavelength_scale)
{
  stack.validate();
  check_scale(wavelength_scale);
  return walk(stack, wavelength_scale, [](auto&&...) {});
}

ScatterCoeffs extract_coeffs(const TransferMatrix& m)
{
  // (t, 0) = M (1, r)
  if (!(std::abs(m(1, 1)) > kSingularTol) || !std::isfinite(std::abs(m(1, 1))))
    throw SingularStack("transfer matrix is singular: no outgoing-only solution");
  const cplx r = -m(1, 0) / m(1, 1);
  const cplx t = m(0, 0) + m(0, 1) * r;
  if (!std::isfinite(std::abs(t)) || !std::isfinite(std::abs(r)))
    throw SingularStack("transfer matrix produced non-finite coefficients");
  return {t, r};
}

StackCoeffs stack_coeffs(const LayerStack& stack, double wavelength_scale)
{
  const ScatterCoeffs c = extract_coeffs(stack_matrix(stack, wavelength_scale));
  const double ratio = stack.ambient_out.real() / stack.ambient_in.real();
  return {c, 1.0 - std::norm(c.r) - ratio * std::norm(c.t)};
}

ScatterCoeffs nlayer_replacement(long n_layers, cplx cond)
{
  if (n_layers < 1)
    throw InvalidArgument("layer count must be at least 1");
  SheetParams p;
  p.cond = cond * static_cast<double>(n_layers);
  return solve_single_sheet(p);
}

DecouplingLayers decoupling_layer_number(double cond)
{
  if (!(cond > 0.0) || !std::isfinite(cond))
    throw InvalidArgument("decoupling layer number needs a positive conductance");
  DecouplingLayers out;
  out.n_exact = 2.0 / cond;

  auto residual = [cond](long n) {
    const ScatterCoeffs c = nlayer_replacement(n, cond);
    return std::abs(c.t + c.r);
  };
  // |t_N + r_N| = |2 - N cond| / (2 + N cond) is unimodal in N; the minimizer
  // is one of the integers bracketing 2/cond.
  const long lo = std::max(1L, static_cast<long>(std::floor(out.n_exact)));
  const long hi = std::max(1L, static_cast<long>(std::ceil(out.n_exact)));
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  out.n_int = (r_hi < r_lo) ? hi : lo;
  out.residual = std::min(r_lo, r_hi);
  return out;
}

std::vector<LocalField> local_fields(const LayerStack& stack, double wavelength_scale)
{
  const ScatterCoeffs c = extract_coeffs(stack_matrix(stack, wavelength_scale));
  const Eigen::Vector2cd front(1.0, c.r);
  const double n_in = stack.ambient_in.real();

  std::vector<LocalField> out;
  out.reserve(stack.sheet_count());
  walk(stack, wavelength_scale,
       [&](std::size_t index, const Sheet& sheet, cplx, const TransferMatrix& upto, double phase) {
         const Eigen::Vector2cd v = upto * front;
         LocalField f;
         f.layer_index = index;
         f.field = v(0) + v(1);
         f.phase = phase;
         f.absorbed = sheet.params.cond.real() * std::norm(f.field) / n_in;
         out.push_back(f);
       });
  return out;
}

EmissionLedger make_ledger(const LayerStack& stack)
{
  EmissionLedger ledger;
  for (const Layer& layer : stack.layers)
  {
    if (const auto* sheet = std::get_if<Sheet>(&layer))
      ledger.entries.push_back({cplx{}, 0.0, sheet->sign});
  }
  return ledger;
}

EmissionReflectance reflectance_with_emission(const LayerStack& stack, const EmissionLedger& ledger,
                                              double wavelength_scale)
{
  if (ledger.entries.size() != stack.sheet_count())
    throw LedgerMismatch("emission ledger has " + std::to_string(ledger.entries.size()) +
                         " entries but the stack has " + std::to_string(stack.sheet_count()) + " sheets");
  for (const EmissionEntry& e : ledger.entries)
  {
    if (e.sign != 1 && e.sign != -1)
      throw InvalidArgument("ledger sign must be +1 or -1");
  }

  const ScatterCoeffs c = extract_coeffs(stack_matrix(stack, wavelength_scale));
  const std::vector<LocalField> fields = local_fields(stack, wavelength_scale);

  // Direction of the upper-level correction, set by the stack-level t + r as
  // for a single sheet. When t + r vanishes the two levels are degenerate and
  // the correction is placed in quadrature with r, so the level label does not
  // change the reflectance.
  const cplx sum = c.t + c.r;
  cplx dir;
  if (std::abs(sum) >= kDegenerateTol)
    dir = sum / std::abs(sum);
  else if (std::abs(c.r) >= kDegenerateTol)
    dir = cplx{0.0, 1.0} * c.r / std::abs(c.r);
  else
    dir = cplx{0.0, 1.0};

  EmissionReflectance out;
  out.r_stack = c.r;
  out.ledger = ledger;
  cplx amplitude = c.r;
  std::size_t k = 0;
  for (const Layer& layer : stack.layers)
  {
    const auto* sheet = std::get_if<Sheet>(&layer);
    if (sheet == nullptr)
      continue;
    const LocalField& f = fields[k];
    EmissionEntry& entry = out.ledger.entries[k];
    const double mag = std::sqrt(0.5 * sheet->params.branching * f.absorbed);
    entry.b = -static_cast<double>(sheet->params.f_sign) * mag * f.field;
    // Round trip from the front surface to sheet j and back.
    const double branch = entry.sign > 0 ? 0.0 : std::numbers::pi;
    entry.theta = wrap_phase(std::arg(dir) - std::arg(entry.b) + 2.0 * f.phase + branch);
    amplitude += std::polar(1.0, entry.theta) * entry.b;
    ++k;
  }

  out.amplitude = amplitude;
  out.raw = std::norm(amplitude);
  out.clamped = out.raw > 1.0;
  out.reflectance = out.clamped ? 1.0 : out.raw;
  return out;
}

LayerStack uniform_sheets(long count, const Sheet& sheet)
{
  if (count < 0)
    throw InvalidArgument("sheet count must be non-negative");
  LayerStack s;
  s.layers.assign(static_cast<std::size_t>(count), Layer{sheet});
  return s;
}

LayerStack sheets_on(const LayerStack& substrate, long count, const Sheet& sheet)
{
  LayerStack s = uniform_sheets(count, sheet);
  s.ambient_in = substrate.ambient_in;
  s.ambient_out = substrate.ambient_out;
  s.layers.insert(s.layers.end(), substrate.layers.begin(), substrate.layers.end());
  return s;
}

}  // namespace sheetlab
