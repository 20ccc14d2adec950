#include "l1sketch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "l1sketch/errors.hpp"

namespace l1sketch {
namespace {

using nlohmann::json;

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "line " << line << ", column " << col;
  return os.str();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ParseError(where + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> as_doubles(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

DensityFamily parse_family_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }

  const json& deg = field(doc, "degree", "family");
  if (!deg.is_number_integer()) throw ParseError("family.degree: expected an integer");
  const int degree = deg.get<int>();
  if (degree < 0 || degree > kMaxDegree)
    throw ValidationError("family.degree: must lie in [0, " + std::to_string(kMaxDegree) + "]");

  Breakpoints bp(as_doubles(field(doc, "breakpoints", "family"), "family.breakpoints"));

  const json& dens = field(doc, "densities", "family");
  if (!dens.is_array()) throw ParseError("family.densities: expected an array");
  std::vector<PiecewisePolyDensity> densities;
  densities.reserve(dens.size());
  for (std::size_t j = 0; j < dens.size(); ++j) {
    const std::string where = "densities[" + std::to_string(j) + "]";
    PiecewisePolyDensity f;
    f.degree = degree;
    const json& name = field(dens[j], "name", where);
    if (!name.is_string()) throw ParseError(where + ".name: expected a string");
    f.name = name.get<std::string>();
    const json& segs = field(dens[j], "segments", where);
    if (!segs.is_array()) throw ParseError(where + ".segments: expected an array");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string sw = where + ".segments[" + std::to_string(i) + "]";
      PolySegment seg;
      seg.b = as_index(field(segs[i], "b", sw), sw + ".b");
      seg.c = as_index(field(segs[i], "c", sw), sw + ".c");
      seg.coeffs = as_doubles(field(segs[i], "coeffs", sw), sw + ".coeffs");
      f.segments.push_back(std::move(seg));
    }
    densities.push_back(std::move(f));
  }
  DensityFamily family{std::move(bp), std::move(densities), degree};
  validate_family(family, false);
  return family;
}

DensityFamily read_family_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family_json(buf.str());
}

std::string family_to_json(const DensityFamily& family) {
  json doc = json::object();
  doc["degree"] = family.degree;
  doc["breakpoints"] = std::vector<double>(family.breakpoints.points().begin(), family.breakpoints.points().end());
  json dens = json::array();
  for (const auto& f : family.densities) {
    json segs = json::array();
    for (const auto& seg : f.segments) segs.push_back({{"b", seg.b}, {"c", seg.c}, {"coeffs", seg.coeffs}});
    dens.push_back({{"name", f.name}, {"segments", std::move(segs)}});
  }
  doc["densities"] = std::move(dens);
  return doc.dump(2) + "\n";
}

std::string distance_matrix_csv(const DistanceMatrix& dm, const Annotations& annotations) {
  std::string out;
  for (const auto& [k, v] : annotations) out += "# " + k + ": " + v + "\n";
  const std::size_t m = dm.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (j) out += ',';
    out += csv_field(dm.names()[j]);
  }
  out += '\n';
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (k) out += ',';
      out += format_shortest(dm(j, k));
    }
    out += '\n';
  }
  return out;
}

std::string distance_matrix_json(const DistanceMatrix& dm, const Annotations& annotations) {
  json doc = json::object();
  doc["names"] = dm.names();
  json rows = json::array();
  for (std::size_t j = 0; j < dm.size(); ++j) {
    json row = json::array();
    for (std::size_t k = 0; k < dm.size(); ++k) row.push_back(dm(j, k));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  doc["method"] = std::string(to_string(dm.method()));
  json manifest = json::object();
  for (const auto& [k, v] : annotations) manifest[k] = v;
  doc["manifest"] = std::move(manifest);
  return doc.dump(2) + "\n";
}

}  // namespace l1sketch
