#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "sheetlab/stack.hpp"

namespace sheetlab {

/// A stack description as read from disk.
///
/// Schema (JSON):
///
///   {
///     "wavelength_nm": 633,                      // optional reference wavelength
///     "ambient_in": 1,                           // number, [re, im] or {"re":..,"im":..}
///     "ambient_out": [3.882, 0.019],
///     "layers": [
///       {"type": "sheet", "cond": 0.0229, "cond_im": 0, "branching": 1, "f_sign": 1, "sign": -1},
///       {"type": "slab", "n_re": 1.46, "n_im": 0, "d": 0.474}
///     ]
///   }
///
/// Slab thickness `d` is in units of the reference vacuum wavelength; `d_nm`
/// may be given instead when `wavelength_nm` is present.
struct StackFile
{
  LayerStack stack;
  std::optional<double> wavelength_nm;
};

/// Throws InvalidArgument on schema errors.
StackFile parse_stack(const nlohmann::json& doc);

/// Throws IoError if the file cannot be read, InvalidArgument on malformed content.
StackFile load_stack_file(const std::filesystem::path& path);

nlohmann::json to_json(const StackFile& file);

/// Ratio of the working wavelength to the file's reference wavelength
/// (1 when either is absent).
double wavelength_scale(const StackFile& file, std::optional<double> wavelength_nm);

}  // namespace sheetlab
