#include "sheetlab/stack_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sheetlab/error.hpp"

namespace sheetlab {

using nlohmann::json;

namespace {

double number_at(const json& obj, const char* key, double fallback)
{
  if (!obj.contains(key))
    return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw InvalidArgument(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

cplx complex_value(const json& v, const char* what)
{
  if (v.is_number())
    return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re"))
    return {number_at(v, "re", 0.0), number_at(v, "im", 0.0)};
  throw InvalidArgument(std::string("field '") + what + "' must be a number, [re, im] or {re, im}");
}

int sign_at(const json& obj, const char* key, int fallback)
{
  const double v = number_at(obj, key, fallback);
  if (v != 1.0 && v != -1.0)
    throw InvalidArgument(std::string("field '") + key + "' must be +1 or -1");
  return static_cast<int>(v);
}

json complex_json(cplx z)
{
  if (z.imag() == 0.0)
    return z.real();
  return json::array({z.real(), z.imag()});
}

}  // namespace

StackFile parse_stack(const json& doc)
{
  if (!doc.is_object())
    throw InvalidArgument("stack description must be a JSON object");

  StackFile out;
  if (doc.contains("wavelength_nm"))
  {
    const double wl = number_at(doc, "wavelength_nm", 0.0);
    if (!(wl > 0.0))
      throw InvalidArgument("wavelength_nm must be positive");
    out.wavelength_nm = wl;
  }
  if (doc.contains("ambient_in"))
    out.stack.ambient_in = complex_value(doc.at("ambient_in"), "ambient_in");
  if (doc.contains("ambient_out"))
    out.stack.ambient_out = complex_value(doc.at("ambient_out"), "ambient_out");

  if (doc.contains("layers"))
  {
    const json& layers = doc.at("layers");
    if (!layers.is_array())
      throw InvalidArgument("'layers' must be an array");
    for (const json& item : layers)
    {
      if (!item.is_object() || !item.contains("type") || !item.at("type").is_string())
        throw InvalidArgument("every layer needs a string 'type'");
      const std::string type = item.at("type").get<std::string>();
      if (type == "sheet")
      {
        Sheet s;
        if (!item.contains("cond"))
          throw InvalidArgument("sheet layer needs 'cond'");
        s.params.cond = {number_at(item, "cond", 0.0), number_at(item, "cond_im", 0.0)};
        s.params.branching = number_at(item, "branching", 1.0);
        s.params.f_sign = sign_at(item, "f_sign", 1);
        s.sign = sign_at(item, "sign", -1);
        out.stack.layers.emplace_back(s);
      }
      else if (type == "slab")
      {
        Slab s;
        s.n = {number_at(item, "n_re", 1.0), number_at(item, "n_im", 0.0)};
        if (item.contains("d") == item.contains("d_nm"))
          throw InvalidArgument("slab layer needs exactly one of 'd' or 'd_nm'");
        if (item.contains("d"))
        {
          s.d = number_at(item, "d", 0.0);
        }
        else
        {
          if (!out.wavelength_nm)
            throw InvalidArgument("'d_nm' requires a top-level 'wavelength_nm'");
          s.d = number_at(item, "d_nm", 0.0) / *out.wavelength_nm;
        }
        out.stack.layers.emplace_back(s);
      }
      else
      {
        throw InvalidArgument("unknown layer type '" + type + "'");
      }
    }
  }
  out.stack.validate();
  return out;
}

StackFile load_stack_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open stack file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw IoError("cannot read stack file " + path.string());

  json doc;
  try
  {
    doc = json::parse(buf.str());
  }
  catch (const json::parse_error& e)
  {
    throw InvalidArgument("stack file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_stack(doc);
}

json to_json(const StackFile& file)
{
  json doc;
  if (file.wavelength_nm)
    doc["wavelength_nm"] = *file.wavelength_nm;
  doc["ambient_in"] = complex_json(file.stack.ambient_in);
  doc["ambient_out"] = complex_json(file.stack.ambient_out);
  json layers = json::array();
  for (const Layer& layer : file.stack.layers)
  {
    if (const auto* s = std::get_if<Sheet>(&layer))
    {
      json j = {{"type", "sheet"},
                {"cond", s->params.cond.real()},
                {"branching", s->params.branching},
                {"f_sign", s->params.f_sign},
                {"sign", s->sign}};
      if (s->params.cond.imag() != 0.0)
        j["cond_im"] = s->params.cond.imag();
      layers.push_back(j);
    }
    else
    {
      const auto& slab = std::get<Slab>(layer);
      layers.push_back({{"type", "slab"}, {"n_re", slab.n.real()}, {"n_im", slab.n.imag()}, {"d", slab.d}});
    }
  }
  doc["layers"] = layers;
  return doc;
}

double wavelength_scale(const StackFile& file, std::optional<double> wavelength_nm)
{
  if (!file.wavelength_nm || !wavelength_nm)
    return 1.0;
  if (!(*wavelength_nm > 0.0))
    throw InvalidArgument("wavelength must be positive");
  return *wavelength_nm / *file.wavelength_nm;
}

}  // namespace sheetlab
