#include "sheetlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sheetlab/error.hpp"
#include "sheetlab/fields.hpp"
#include "sheetlab/format.hpp"
#include "sheetlab/stack.hpp"
#include "sheetlab/stack_io.hpp"
#include "sheetlab/surface.hpp"
#include "sheetlab/twostate.hpp"

namespace sheetlab::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Result
{
  json doc = json::object();
  Table table;
};

const char* command_name(Command c)
{
  switch (c)
  {
  case Command::coeffs: return "coeffs";
  case Command::twostate: return "twostate";
  case Command::stack: return "stack";
  case Command::sweep: return "sweep";
  case Command::decouple: return "decouple";
  case Command::profile: return "profile";
  }
  return "?";
}

const char* variable_name(SweepVariable v)
{
  switch (v)
  {
  case SweepVariable::cond: return "cond";
  case SweepVariable::n_layers: return "n_layers";
  case SweepVariable::wavelength_nm: return "wavelength_nm";
  case SweepVariable::thickness: return "thickness";
  }
  return "?";
}

json complex_json(cplx z)
{
  if (z.imag() == 0.0)
    return z.real();
  return json::array({z.real(), z.imag()});
}

cplx complex_from(const json& v, const char* what)
{
  if (v.is_number())
    return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InvalidArgument(std::string("--from file: '") + what + "' must be a number or [re, im]");
}

json double_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json config_echo(const RunConfig& c)
{
  json j;
  j["command"] = command_name(c.command);
  if (c.input_path) j["stack"] = *c.input_path;
  if (c.from_path) j["from"] = *c.from_path;
  if (c.cond) j["cond"] = *c.cond;
  if (c.cond_im) j["cond_im"] = *c.cond_im;
  if (c.branching) j["branching"] = *c.branching;
  if (c.f_sign) j["f_sign"] = *c.f_sign;
  if (c.sign) j["sign"] = *c.sign;
  if (c.n_layers) j["n_layers"] = *c.n_layers;
  if (c.wavelength_nm) j["wavelength_nm"] = *c.wavelength_nm;
  if (c.overlap) j["overlap"] = *c.overlap;
  if (c.sweep)
  {
    j["sweep"] = {{"variable", variable_name(c.sweep->variable)},
                  {"start", c.sweep->start},
                  {"stop", c.sweep->stop},
                  {"steps", c.sweep->steps}};
    if (c.sweep->variable == SweepVariable::thickness)
      j["slab_index"] = c.slab_index;
  }
  if (c.command == Command::profile)
  {
    j["state"] = std::string(1, c.state);
    j["antisymmetric"] = c.antisymmetric;
    j["half_width"] = c.half_width;
    j["points"] = c.points;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Input resolution: flags > --from file > stack file > defaults.

struct Inputs
{
  SheetParams sheet;  // one physical sheet
  int sign = -1;
  long n_layers = 1;
  cplx overlap{};
  std::optional<ScatterCoeffs> coeffs_override;
  std::optional<StackFile> stack;
  std::optional<double> wavelength_nm;
};

json load_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try
  {
    return json::parse(buf.str());
  }
  catch (const json::parse_error& e)
  {
    throw InvalidArgument(path + " is not valid JSON: " + e.what());
  }
}

Inputs resolve(const RunConfig& c)
{
  Inputs in;
  double cond_re = kGrapheneConductance;
  double cond_im = 0.0;

  if (c.from_path)
  {
    const json doc = load_json_file(*c.from_path);
    if (!doc.contains("t") || !doc.contains("r"))
      throw InvalidArgument("--from file needs 't' and 'r'");
    in.coeffs_override = ScatterCoeffs{complex_from(doc.at("t"), "t"), complex_from(doc.at("r"), "r")};
    const json echo = doc.value("/provenance/config_echo"_json_pointer, json::object());
    if (echo.contains("cond")) cond_re = echo.at("cond").get<double>();
    if (echo.contains("cond_im")) cond_im = echo.at("cond_im").get<double>();
    if (echo.contains("branching")) in.sheet.branching = echo.at("branching").get<double>();
    if (echo.contains("f_sign")) in.sheet.f_sign = echo.at("f_sign").get<int>();
    if (echo.contains("n_layers")) in.n_layers = echo.at("n_layers").get<long>();
    if (echo.contains("overlap")) in.overlap = echo.at("overlap").get<double>();
  }

  if (c.cond) cond_re = *c.cond;
  if (c.cond_im) cond_im = *c.cond_im;
  in.sheet.cond = {cond_re, cond_im};
  if (c.branching) in.sheet.branching = *c.branching;
  if (c.f_sign) in.sheet.f_sign = *c.f_sign;
  if (c.sign) in.sign = *c.sign;
  if (c.n_layers) in.n_layers = *c.n_layers;
  if (c.overlap) in.overlap = *c.overlap;
  in.wavelength_nm = c.wavelength_nm;

  in.sheet.validate();
  if (in.sign != 1 && in.sign != -1)
    throw InvalidArgument("--sign must be +1 or -1");
  if (in.n_layers < 1)
    throw InvalidArgument("--n-layers must be at least 1");

  if (c.input_path)
  {
    in.stack = load_stack_file(*c.input_path);
    // Sheet flags given on the command line override every sheet in the file.
    for (Layer& layer : in.stack->stack.layers)
    {
      if (auto* s = std::get_if<Sheet>(&layer))
      {
        if (c.cond) s->params.cond.real(*c.cond);
        if (c.cond_im) s->params.cond.imag(*c.cond_im);
        if (c.branching) s->params.branching = *c.branching;
        if (c.f_sign) s->params.f_sign = *c.f_sign;
        if (c.sign) s->sign = *c.sign;
      }
    }
    in.stack->stack.validate();
  }
  return in;
}

// ---------------------------------------------------------------------------
// Sheet (closed form) evaluation.

const std::vector<std::string> kSheetColumns = {
    "cond",        "n_layers",    "t_re",       "t_im",        "r_re",       "r_im",       "absorbance",
    "abs_t_plus_r", "b_re",       "b_im",       "offdiag_re",  "offdiag_im", "theta_plus", "e_plus",
    "e_minus",     "r_plus_re",   "r_plus_im",  "r_minus_re",  "r_minus_im"};

struct SheetEval
{
  std::vector<double> row;
  json doc;
};

SheetEval eval_sheet(const Inputs& in)
{
  SheetParams eff = in.sheet;
  eff.cond = in.sheet.cond * static_cast<double>(in.n_layers);
  const ScatterCoeffs coeffs = in.coeffs_override ? *in.coeffs_override : nlayer_replacement(in.n_layers, in.sheet.cond);
  const double a = absorbance(coeffs, eff);
  const EmissionAmplitudes em = emission_amplitude(eff, coeffs);

  TwoStateSystem sys;
  sys.coeffs = coeffs;
  sys.b = em.b_r;
  sys.overlap = in.overlap;
  const cplx h = offdiagonal(sys);
  const cplx sum = coeffs.t + coeffs.r;

  double theta_plus = kNaN;
  double theta_minus = kNaN;
  LevelEnergies levels{0.0, 0.0};
  bool degenerate = false;
  try
  {
    const PhasePair phases = decoupling_phase(sys);
    theta_plus = phases.theta_plus;
    theta_minus = phases.theta_minus;
    levels = level_energies(sys, theta_plus);
  }
  catch (const DegenerateDecoupling&)
  {
    degenerate = true;
  }
  CorrectedReflection corr{cplx{kNaN, kNaN}, cplx{kNaN, kNaN}};
  if (std::abs(sum) >= kDegenerateTol)
    corr = corrected_reflection(sys);

  SheetEval out;
  out.row = {in.sheet.cond.real(), static_cast<double>(in.n_layers), coeffs.t.real(), coeffs.t.imag(),
             coeffs.r.real(), coeffs.r.imag(), a, std::abs(sum), em.b_r.real(), em.b_r.imag(), h.real(),
             h.imag(), theta_plus, levels.e_plus, levels.e_minus, corr.r_plus.real(), corr.r_plus.imag(),
             corr.r_minus.real(), corr.r_minus.imag()};

  json& d = out.doc;
  d["t"] = complex_json(coeffs.t);
  d["r"] = complex_json(coeffs.r);
  d["A"] = a;
  d["absorption_scale"] = eff.cond.real();
  d["t_plus_r"] = complex_json(sum);
  d["b"] = complex_json(em.b_r);
  d["f_mag"] = em.f_mag;
  d["offdiagonal"] = complex_json(h);
  d["degenerate"] = degenerate;
  d["theta_plus"] = double_or_null(theta_plus);
  d["theta_minus"] = double_or_null(theta_minus);
  d["e_plus"] = levels.e_plus;
  d["e_minus"] = levels.e_minus;
  if (std::abs(sum) >= kDegenerateTol)
  {
    d["r_plus"] = complex_json(corr.r_plus);
    d["r_minus"] = complex_json(corr.r_minus);
  }
  else
  {
    d["r_plus"] = nullptr;
    d["r_minus"] = nullptr;
  }
  d["spin_eigenvalues"] = json::array({-std::abs(h), std::abs(h)});
  if (in.overlap != cplx{})
  {
    const OrthogonalBasis ob = orthogonalize(sys);
    d["orthogonal_norm_B"] = std::sqrt(ob.gram(1, 1).real());
    d["orthogonal_offdiagonal"] = complex_json(ob.hamiltonian(1, 0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stack (transfer matrix) evaluation.

const std::vector<std::string> kStackColumns = {
    "t_re", "t_im", "r_re", "r_im", "reflectance", "transmittance", "absorbance",
    "abs_t_plus_r", "reflectance_emission", "clamped"};

struct StackEval
{
  std::vector<double> row;
  json doc;
};

StackEval eval_stack(const LayerStack& stack, double scale)
{
  const StackCoeffs sc = stack_coeffs(stack, scale);
  const EmissionReflectance er = reflectance_with_emission(stack, make_ledger(stack), scale);
  const double transmittance = (stack.ambient_out.real() / stack.ambient_in.real()) * std::norm(sc.coeffs.t);

  StackEval out;
  out.row = {sc.coeffs.t.real(), sc.coeffs.t.imag(), sc.coeffs.r.real(), sc.coeffs.r.imag(),
             std::norm(sc.coeffs.r), transmittance, sc.absorbance, std::abs(sc.coeffs.t + sc.coeffs.r),
             er.reflectance, er.clamped ? 1.0 : 0.0};

  json& d = out.doc;
  d["t"] = complex_json(sc.coeffs.t);
  d["r"] = complex_json(sc.coeffs.r);
  d["reflectance"] = std::norm(sc.coeffs.r);
  d["transmittance"] = transmittance;
  d["absorbance"] = sc.absorbance;
  d["reflectance_emission"] = er.reflectance;
  d["reflectance_emission_raw"] = er.raw;
  d["clamped"] = er.clamped;
  json sheets = json::array();
  const std::vector<LocalField> fields = local_fields(stack, scale);
  for (std::size_t i = 0; i < fields.size(); ++i)
  {
    sheets.push_back({{"layer", fields[i].layer_index},
                      {"field", complex_json(fields[i].field)},
                      {"absorbed", fields[i].absorbed},
                      {"b", complex_json(er.ledger.entries[i].b)},
                      {"theta", er.ledger.entries[i].theta},
                      {"sign", er.ledger.entries[i].sign}});
  }
  d["sheets"] = sheets;
  return out;
}

LayerStack point_stack(const Inputs& in, const RunConfig& c)
{
  const Sheet sheet{in.sheet, in.sign};
  if (in.stack)
  {
    if (c.n_layers)
      return sheets_on(in.stack->stack, in.n_layers, sheet);
    return in.stack->stack;
  }
  return uniform_sheets(in.n_layers, sheet);
}

double point_scale(const Inputs& in)
{
  return in.stack ? wavelength_scale(*in.stack, in.wavelength_nm) : 1.0;
}

// ---------------------------------------------------------------------------
// Commands.

Result run_sheet_command(const RunConfig& c, bool full)
{
  const Inputs in = resolve(c);
  SheetEval ev = eval_sheet(in);
  Result res;
  if (full)
  {
    res.doc = std::move(ev.doc);
  }
  else
  {
    res.doc["t"] = ev.doc["t"];
    res.doc["r"] = ev.doc["r"];
    res.doc["A"] = ev.doc["A"];
    res.doc["absorption_scale"] = ev.doc["absorption_scale"];
  }
  res.table.columns = kSheetColumns;
  res.table.rows.push_back(std::move(ev.row));
  return res;
}

Result run_stack_command(const RunConfig& c)
{
  const Inputs in = resolve(c);
  StackEval ev = eval_stack(point_stack(in, c), point_scale(in));
  Result res;
  res.doc = std::move(ev.doc);
  res.table.columns = kStackColumns;
  res.table.rows.push_back(std::move(ev.row));
  return res;
}

Result run_decouple(const RunConfig& c)
{
  const Inputs in = resolve(c);
  if (in.sheet.cond.imag() != 0.0)
    throw InvalidArgument("decouple needs a real conductance");
  const DecouplingLayers d = decoupling_layer_number(in.sheet.cond.real());
  const ScatterCoeffs at = nlayer_replacement(d.n_int, in.sheet.cond);
  Result res;
  res.doc["n_exact"] = d.n_exact;
  res.doc["n_int"] = d.n_int;
  res.doc["residual"] = d.residual;
  res.doc["t"] = complex_json(at.t);
  res.doc["r"] = complex_json(at.r);
  res.table.columns = {"cond", "n_exact", "n_int", "residual"};
  res.table.rows.push_back({in.sheet.cond.real(), d.n_exact, static_cast<double>(d.n_int), d.residual});
  return res;
}

Result run_profile(const RunConfig& c)
{
  const Inputs in = resolve(c);
  const Grid grid = make_grid(c.half_width, c.points);

  SheetParams eff = in.sheet;
  eff.cond = in.sheet.cond * static_cast<double>(in.n_layers);
  const ScatterCoeffs coeffs = in.coeffs_override ? *in.coeffs_override : nlayer_replacement(in.n_layers, in.sheet.cond);

  FieldProfile profile;
  if (c.state == 'a')
  {
    profile = eval_a(coeffs.t, coeffs.r, grid);
  }
  else if (c.state == 'b')
  {
    const EmissionAmplitudes em = emission_amplitude(eff, coeffs);
    profile = eval_b(em.b_r, c.antisymmetric ? -em.b_l : em.b_l, grid);
  }
  else
  {
    throw InvalidArgument("--state must be 'a' or 'b'");
  }

  const GaugeDecomposition dec = decompose(profile);
  const SurfaceAxial ax = axial_at_surface(dec);
  const Continuity cont = continuity(profile);

  Result res;
  res.doc["continuous"] = cont.continuous;
  res.doc["jump"] = complex_json(cont.jump);
  res.doc["axial_at_surface"] = complex_json(ax.value);
  res.doc["axial_jump"] = complex_json(ax.jump);

  res.table.columns = {"x", "re_right", "im_right", "re_left", "im_left",
                       "re_polar", "im_polar", "re_axial", "im_axial"};
  json rows = json::array();
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    res.table.rows.push_back({grid[i].x, profile.right_env[i].real(), profile.right_env[i].imag(),
                              profile.left_env[i].real(), profile.left_env[i].imag(), dec.polar_env[i].real(),
                              dec.polar_env[i].imag(), dec.axial_env[i].real(), dec.axial_env[i].imag()});
    rows.push_back(res.table.rows.back());
  }
  res.doc["columns"] = res.table.columns;
  res.doc["rows"] = rows;

  // CSV output keeps the side tags, so it is produced by the fields emitter.
  std::ostringstream csv;
  write_profile_csv(csv, profile);
  res.doc["profile_csv"] = csv.str();
  return res;
}

std::vector<double> sweep_values(const SweepSpec& s)
{
  std::vector<double> v(static_cast<std::size_t>(s.steps));
  for (long i = 0; i < s.steps; ++i)
  {
    v[static_cast<std::size_t>(i)] =
        s.steps == 1 ? s.start : s.start + (s.stop - s.start) * static_cast<double>(i) / static_cast<double>(s.steps - 1);
  }
  return v;
}

std::size_t resolve_slab(const LayerStack& stack, long slab_index)
{
  std::vector<std::size_t> slabs;
  for (std::size_t i = 0; i < stack.layers.size(); ++i)
  {
    if (std::holds_alternative<Slab>(stack.layers[i]))
      slabs.push_back(i);
  }
  if (slabs.empty())
    throw InvalidArgument("thickness sweep needs a slab layer in the stack");
  if (slab_index < 0)
    return slabs.back();
  if (static_cast<std::size_t>(slab_index) >= stack.layers.size() ||
      !std::holds_alternative<Slab>(stack.layers[static_cast<std::size_t>(slab_index)]))
    throw InvalidArgument("--slab-index does not point at a slab layer");
  return static_cast<std::size_t>(slab_index);
}

Result run_sweep(const RunConfig& c)
{
  if (!c.sweep)
    throw InvalidArgument("sweep needs --sweep var:start:stop:steps");
  const SweepSpec& spec = *c.sweep;
  const Inputs base = resolve(c);
  const bool use_stack = base.stack.has_value() || spec.variable == SweepVariable::wavelength_nm ||
                         spec.variable == SweepVariable::thickness;
  if (use_stack && !base.stack)
    throw InvalidArgument(std::string("sweeping ") + variable_name(spec.variable) + " needs --stack");

  std::size_t slab = 0;
  if (spec.variable == SweepVariable::thickness)
    slab = resolve_slab(point_stack(base, c), c.slab_index);

  const std::vector<double> values = sweep_values(spec);
  for (double v : values)
  {
    if (spec.variable == SweepVariable::n_layers && std::lround(v) < 1)
      throw InvalidArgument("n_layers sweep values must be >= 1");
  }

  auto eval_row = [&](double value) -> std::vector<double> {
    Inputs in = base;
    RunConfig rc = c;
    std::optional<double> wl = in.wavelength_nm;
    switch (spec.variable)
    {
    case SweepVariable::cond:
      in.sheet.cond.real(value);
      in.sheet.validate();
      if (in.stack)
      {
        for (Layer& layer : in.stack->stack.layers)
        {
          if (auto* s = std::get_if<Sheet>(&layer))
            s->params.cond.real(value);
        }
      }
      break;
    case SweepVariable::n_layers:
      in.n_layers = std::lround(value);
      rc.n_layers = in.n_layers;
      break;
    case SweepVariable::wavelength_nm:
      wl = value;
      break;
    case SweepVariable::thickness:
      break;
    }

    std::vector<double> row{value};
    if (!use_stack)
    {
      const SheetEval ev = eval_sheet(in);
      row.insert(row.end(), ev.row.begin(), ev.row.end());
      return row;
    }
    LayerStack stack = point_stack(in, rc);
    if (spec.variable == SweepVariable::thickness)
    {
      if (value < 0.0)
        throw InvalidArgument("thickness values must be non-negative");
      std::get<Slab>(stack.layers[slab]).d = value;
    }
    const StackEval ev = eval_stack(stack, wavelength_scale(*in.stack, wl));
    row.insert(row.end(), ev.row.begin(), ev.row.end());
    return row;
  };

  Result res;
  res.table.columns.push_back(variable_name(spec.variable));
  const auto& cols = use_stack ? kStackColumns : kSheetColumns;
  res.table.columns.insert(res.table.columns.end(), cols.begin(), cols.end());
  res.table.rows.resize(values.size());

  // Rows are written by index, so the worker count never changes the output.
  const unsigned workers = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(values.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned id) {
    try
    {
      for (std::size_t i = next++; i < values.size(); i = next++)
        res.table.rows[i] = eval_row(values[i]);
    }
    catch (...)
    {
      failures[id] = std::current_exception();
    }
  };
  if (workers == 1)
  {
    work(0);
  }
  else
  {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
    for (auto& t : pool)
      t.join();
  }
  for (const auto& f : failures)
  {
    if (f)
      std::rethrow_exception(f);
  }

  res.doc["columns"] = res.table.columns;
  json rows = json::array();
  for (const auto& row : res.table.rows)
  {
    json r = json::array();
    for (double v : row)
      r.push_back(double_or_null(v));
    rows.push_back(r);
  }
  res.doc["rows"] = rows;
  return res;
}

// ---------------------------------------------------------------------------
// Output.

std::string render_csv(const Table& table)
{
  std::string s;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
  {
    if (i)
      s += ',';
    s += table.columns[i];
  }
  s += '\n';
  for (const auto& row : table.rows)
  {
    for (std::size_t i = 0; i < row.size(); ++i)
    {
      if (i)
        s += ',';
      s += format_double(row[i]);
    }
    s += '\n';
  }
  return s;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out)
{
  if (!c.output_path)
  {
    out << text;
    return;
  }
  std::ofstream f(*c.output_path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot open output file " + *c.output_path);
  f << text;
  f.flush();
  if (!f)
    throw IoError("failed writing output file " + *c.output_path);
}

Format default_format(Command c)
{
  return (c == Command::sweep || c == Command::profile) ? Format::csv : Format::json;
}

}  // namespace

SweepSpec parse_sweep(std::string_view text)
{
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text)
  {
    if (ch == ':')
    {
      parts.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw InvalidArgument("--sweep expects var:start:stop:steps");

  SweepSpec s;
  if (parts[0] == "cond")
    s.variable = SweepVariable::cond;
  else if (parts[0] == "n_layers")
    s.variable = SweepVariable::n_layers;
  else if (parts[0] == "wavelength_nm")
    s.variable = SweepVariable::wavelength_nm;
  else if (parts[0] == "thickness")
    s.variable = SweepVariable::thickness;
  else
    throw InvalidArgument("unknown sweep variable '" + parts[0] + "'");

  try
  {
    std::size_t pos = 0;
    s.start = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("start");
    s.stop = std::stod(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("stop");
    s.steps = std::stol(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument("steps");
  }
  catch (const std::exception&)
  {
    throw InvalidArgument("--sweep: start, stop and steps must be numbers");
  }
  if (!std::isfinite(s.start) || !std::isfinite(s.stop))
    throw InvalidArgument("--sweep bounds must be finite");
  if (s.steps < 1)
    throw InvalidArgument("--sweep needs steps >= 1");
  if (s.start > s.stop)
    throw InvalidArgument("--sweep needs start <= stop");
  return s;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
  try
  {
    if (config.command == Command::sweep && !config.sweep)
      throw InvalidArgument("sweep needs --sweep var:start:stop:steps");
    if (config.threads == 0)
      throw InvalidArgument("--threads must be at least 1");

    Result res;
    switch (config.command)
    {
    case Command::coeffs: res = run_sheet_command(config, false); break;
    case Command::twostate: res = run_sheet_command(config, true); break;
    case Command::stack: res = run_stack_command(config); break;
    case Command::sweep: res = run_sweep(config); break;
    case Command::decouple: res = run_decouple(config); break;
    case Command::profile: res = run_profile(config); break;
    }

    const Format fmt = config.format.value_or(default_format(config.command));
    std::string text;
    if (fmt == Format::csv)
    {
      if (config.command == Command::profile)
        text = res.doc["profile_csv"].get<std::string>();
      else
        text = render_csv(res.table);
    }
    else
    {
      if (config.command == Command::profile)
        res.doc.erase("profile_csv");
      json doc;
      doc["provenance"] = {{"tool_version", kToolVersion}, {"config_echo", config_echo(config)}};
      for (auto& [k, v] : res.doc.items())
        doc[k] = v;
      text = doc.dump(2) + "\n";
    }
    emit(config, text, out);
    return 0;
  }
  catch (const IoError& e)
  {
    err << "sheetlab: I/O error: " << e.what() << '\n';
    return 2;
  }
  catch (const NumericalError& e)
  {
    err << "sheetlab: numerical error: " << e.what() << '\n';
    return 3;
  }
  catch (const InvalidArgument& e)
  {
    err << "sheetlab: config error: " << e.what() << '\n';
    return 1;
  }
  catch (const json::exception& e)
  {
    err << "sheetlab: config error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Optics of stacked conducting sheets: scattering, emission and two-state diagnostics"};
  app.footer(
      "Precedence: command-line flags override values from --from and from the stack file;\n"
      "sheet flags (--cond, --branching, --f-sign, --sign) apply to every sheet in --stack.\n"
      "Exit codes: 0 ok, 1 config error, 2 file I/O error, 3 numerical error.");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format_text;
  std::string sweep_text;

  struct Sub
  {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::coeffs, "coeffs", "transmission, reflection and absorbance of N coincident sheets"},
      {Command::twostate, "twostate", "two-state diagnostics: off-diagonal element, phases, energies, corrected r"},
      {Command::stack, "stack", "transfer-matrix coefficients and emission-corrected reflectance of a stack"},
      {Command::sweep, "sweep", "tabulate a command over cond, n_layers, wavelength_nm or thickness"},
      {Command::decouple, "decouple", "layer number where t + r = 0"},
      {Command::profile, "profile", "field envelopes and polar/axial decomposition on a grid"},
  };

  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const Sub& s : subs)
  {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    apps.emplace_back(sub, s.command);
    sub->add_option("--cond", cfg.cond, "sheet conductance sigma/(eps0 c), default pi*alpha");
    sub->add_option("--cond-im", cfg.cond_im, "imaginary part of the conductance");
    sub->add_option("--branching", cfg.branching, "branching ratio in [0, 1], default 1");
    sub->add_option("--f-sign", cfg.f_sign, "sign of the matter amplitude F (+1/-1)");
    sub->add_option("--sign", cfg.sign, "emission branch of each sheet (+1 upper, -1 lower)");
    sub->add_option("--n-layers", cfg.n_layers, "number of coincident sheets");
    sub->add_option("--stack", cfg.input_path, "stack description (JSON)");
    sub->add_option("--from", cfg.from_path, "JSON output of 'coeffs' to reuse t and r");
    sub->add_option("--wavelength-nm", cfg.wavelength_nm, "working wavelength (nm)");
    sub->add_option("--overlap", cfg.overlap, "real overlap <a|b>, default 0");
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
    sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (s.command == Command::sweep)
    {
      sub->add_option("--sweep", sweep_text, "var:start:stop:steps")->required();
      sub->add_option("--slab-index", cfg.slab_index, "layer index of the slab for thickness sweeps (default: last slab)");
      sub->add_option("--threads", cfg.threads, "worker threads");
    }
    if (s.command == Command::profile)
    {
      sub->add_option("--state", cfg.state, "a (scattering) or b (emission)");
      sub->add_flag("--antisymmetric", cfg.antisymmetric, "use b_l = -b_r for the emission state");
      sub->add_option("--half-width", cfg.half_width, "grid half width in units of c/omega");
      sub->add_option("--points", cfg.points, "bulk points per side");
    }
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  for (const auto& [sub, command] : apps)
  {
    if (sub->parsed())
      cfg.command = command;
  }
  try
  {
    if (!format_text.empty())
      cfg.format = format_text == "csv" ? Format::csv : Format::json;
    if (!sweep_text.empty())
      cfg.sweep = parse_sweep(sweep_text);
  }
  catch (const InvalidArgument& e)
  {
    err << "sheetlab: config error: " << e.what() << '\n';
    return 1;
  }
  return run(cfg, out, err);
}

}  // namespace sheetlab::cli
