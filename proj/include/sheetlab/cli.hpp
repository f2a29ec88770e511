#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace sheetlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command
{
  coeffs,
  twostate,
  stack,
  sweep,
  decouple,
  profile,
};

enum class Format
{
  csv,
  json,
};

enum class SweepVariable
{
  cond,
  n_layers,
  wavelength_nm,
  thickness,
};

struct SweepSpec
{
  SweepVariable variable = SweepVariable::cond;
  double start = 0.0;
  double stop = 0.0;
  long steps = 1;
};

/// Everything a run needs. Optional fields left empty fall back to the
/// --from file (coefficients and their config echo), then the stack file,
/// then built-in defaults.
struct RunConfig
{
  Command command = Command::coeffs;
  std::optional<std::string> input_path;   // --stack
  std::optional<std::string> from_path;    // --from
  std::optional<std::string> output_path;  // --out
  std::optional<Format> format;

  std::optional<double> cond;
  std::optional<double> cond_im;
  std::optional<double> branching;
  std::optional<int> f_sign;
  std::optional<int> sign;
  std::optional<long> n_layers;
  std::optional<double> wavelength_nm;
  std::optional<double> overlap;
  std::optional<SweepSpec> sweep;

  // profile
  char state = 'a';
  bool antisymmetric = false;
  double half_width = 6.283185307179586;
  std::size_t points = 64;

  // sweep
  long slab_index = -1;
  unsigned threads = 1;
};

/// Parses "var:start:stop:steps". Throws InvalidArgument.
SweepSpec parse_sweep(std::string_view text);

/// Executes a run. Results go to `output_path` when set, otherwise to `out`.
/// Returns 0 on success, 1 for configuration errors, 2 for file I/O errors and
/// 3 for numerical failures, printing a one-line diagnostic to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sheetlab::cli
