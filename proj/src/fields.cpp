#include "sheetlab/fields.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sheetlab/error.hpp"
#include "sheetlab/format.hpp"

namespace sheetlab {

namespace {

constexpr double kContinuityTol = 1e-10;

bool on_left(const GridPoint& p)
{
  return p.side == Side::minus || (p.side == Side::bulk && p.x < 0.0);
}

std::size_t find_side(const Grid& grid, Side side)
{
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    if (grid[i].side == side)
      return i;
  }
  throw InvalidArgument("grid lacks a one-sided sample at the sheet");
}

const char* side_name(Side s)
{
  switch (s)
  {
  case Side::minus: return "minus";
  case Side::plus: return "plus";
  case Side::bulk: return "bulk";
  }
  return "bulk";
}

cplx plane(double k, double x, double dir)
{
  return std::polar(1.0, dir * k * x);
}

}  // namespace

Grid make_grid(double half_width, std::size_t per_side)
{
  if (!(half_width > 0.0) || per_side == 0)
    throw InvalidArgument("grid needs a positive half width and at least one point per side");
  Grid g;
  g.reserve(2 * per_side + 2);
  const double step = half_width / static_cast<double>(per_side);
  for (std::size_t i = per_side; i >= 1; --i)
    g.push_back({-step * static_cast<double>(i), Side::bulk});
  g.push_back({0.0, Side::minus});
  g.push_back({0.0, Side::plus});
  for (std::size_t i = 1; i <= per_side; ++i)
    g.push_back({step * static_cast<double>(i), Side::bulk});
  return g;
}

void validate_grid(const Grid& grid)
{
  int minus = 0;
  int plus = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    const GridPoint& p = grid[i];
    if (!std::isfinite(p.x))
      throw InvalidArgument("grid positions must be finite");
    if (p.side == Side::bulk && p.x == 0.0)
      throw InvalidArgument("the sheet at x = 0 must be sampled as a 0-/0+ pair, not a bulk point");
    if (p.side != Side::bulk && p.x != 0.0)
      throw InvalidArgument("one-sided samples must sit at x = 0");
    minus += p.side == Side::minus;
    plus += p.side == Side::plus;
    if (i == 0)
      continue;
    const GridPoint& q = grid[i - 1];
    const bool ordered = (q.x < p.x) || (q.side == Side::minus && p.side == Side::plus);
    if (!ordered)
      throw InvalidArgument("grid positions must be strictly increasing (0- before 0+)");
  }
  if (minus != 1 || plus != 1)
    throw InvalidArgument("grid needs exactly one 0- and one 0+ sample");
}

FieldProfile eval_a(cplx t, cplx r, const Grid& grid, double k)
{
  if (std::abs(1.0 + r - t) > kContinuityTol)
    throw ContinuityViolation("scattering pair violates 1 + r = t (|1 + r - t| = " +
                              std::to_string(std::abs(1.0 + r - t)) + ")");
  validate_grid(grid);
  FieldProfile p;
  p.grid = grid;
  p.k = k;
  p.incident_right = 1.0;
  p.right_env.reserve(grid.size());
  p.left_env.reserve(grid.size());
  for (const GridPoint& g : grid)
  {
    const bool left = on_left(g);
    p.right_env.push_back((left ? cplx{1.0} : t) * plane(k, g.x, +1.0));
    p.left_env.push_back(left ? r * plane(k, g.x, -1.0) : cplx{});
  }
  return p;
}

FieldProfile eval_b(cplx b_r, cplx b_l, const Grid& grid, double k)
{
  validate_grid(grid);
  FieldProfile p;
  p.grid = grid;
  p.k = k;
  p.right_env.reserve(grid.size());
  p.left_env.reserve(grid.size());
  for (const GridPoint& g : grid)
  {
    const bool left = on_left(g);
    p.right_env.push_back(left ? cplx{} : b_r * plane(k, g.x, +1.0));
    p.left_env.push_back(left ? b_l * plane(k, g.x, -1.0) : cplx{});
  }
  return p;
}

Continuity continuity(const FieldProfile& profile, double tol)
{
  const std::size_t lo = find_side(profile.grid, Side::minus);
  const std::size_t hi = find_side(profile.grid, Side::plus);
  const cplx below = profile.right_env[lo] + profile.left_env[lo];
  const cplx above = profile.right_env[hi] + profile.left_env[hi];
  Continuity c;
  c.jump = above - below;
  c.continuous = std::abs(c.jump) <= tol;
  return c;
}

GaugeDecomposition decompose(const FieldProfile& profile)
{
  GaugeDecomposition d;
  d.grid = profile.grid;
  d.k = profile.k;
  d.incident_right = profile.incident_right;
  d.incident_left = profile.incident_left;
  d.polar_env.resize(profile.size());
  d.axial_env.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    d.polar_env[i] = 0.5 * (profile.right_env[i] + profile.left_env[i]);
    d.axial_env[i] = 0.5 * (profile.right_env[i] - profile.left_env[i]);
  }
  return d;
}

FieldProfile recombine(const GaugeDecomposition& dec)
{
  FieldProfile p;
  p.grid = dec.grid;
  p.k = dec.k;
  p.incident_right = dec.incident_right;
  p.incident_left = dec.incident_left;
  p.right_env.resize(dec.grid.size());
  p.left_env.resize(dec.grid.size());
  for (std::size_t i = 0; i < dec.grid.size(); ++i)
  {
    p.right_env[i] = dec.polar_env[i] + dec.axial_env[i];
    p.left_env[i] = dec.polar_env[i] - dec.axial_env[i];
  }
  return p;
}

SurfaceAxial axial_at_surface(const GaugeDecomposition& dec)
{
  const std::size_t lo = find_side(dec.grid, Side::minus);
  const std::size_t hi = find_side(dec.grid, Side::plus);
  // Axial part of the uniform background wave at x = 0.
  const cplx background = 0.5 * (dec.incident_right - dec.incident_left);
  SurfaceAxial s;
  s.value = 0.5 * ((dec.axial_env[lo] - background) + (dec.axial_env[hi] - background));
  s.jump = dec.axial_env[hi] - dec.axial_env[lo];
  return s;
}

FieldProfile parity_transform(const FieldProfile& profile)
{
  const Grid& g = profile.grid;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    const GridPoint& a = g[i];
    const GridPoint& b = g[n - 1 - i];
    const bool sides_match = (a.side == Side::bulk && b.side == Side::bulk) ||
                             (a.side == Side::minus && b.side == Side::plus) ||
                             (a.side == Side::plus && b.side == Side::minus);
    if (!sides_match || std::abs(a.x + b.x) > 1e-12 * std::max(1.0, std::abs(a.x)))
      throw AsymmetricGrid("grid is not mirror-symmetric about x = 0");
  }

  FieldProfile p;
  p.grid = g;
  p.k = profile.k;
  p.incident_right = -profile.incident_left;
  p.incident_left = -profile.incident_right;
  p.right_env.resize(n);
  p.left_env.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    p.right_env[i] = -profile.left_env[n - 1 - i];
    p.left_env[i] = -profile.right_env[n - 1 - i];
  }
  return p;
}

void write_profile_csv(std::ostream& os, const FieldProfile& profile)
{
  const GaugeDecomposition dec = decompose(profile);
  os << "x,re_right,im_right,re_left,im_left,re_polar,im_polar,re_axial,im_axial,side\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    const cplx values[] = {profile.right_env[i], profile.left_env[i], dec.polar_env[i], dec.axial_env[i]};
    os << format_double(profile.grid[i].x);
    for (const cplx& v : values)
      os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    os << ',' << side_name(profile.grid[i].side) << '\n';
  }
}

}  // namespace sheetlab
