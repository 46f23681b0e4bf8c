#pragma once

// JSON and CSV surfaces: GroupSpec, GenChar, GroupElement, CcFunction and
// certificates. Floats are written as the shortest round-trip decimal.

#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "lcachar/cc_function.hpp"
#include "lcachar/characters.hpp"
#include "lcachar/error.hpp"
#include "lcachar/group.hpp"
#include "lcachar/lemma_escape.hpp"

namespace lcachar {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline json complex_array(const std::vector<cplx>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(json::array({x.real(), x.imag()}));
  return out;
}

inline std::vector<cplx> parse_complex_array(const json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::Parse, std::string(what) + " must be an array of [re, im] pairs");
  std::vector<cplx> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error(Errc::Parse, std::string(what) + " entries must be [re, im]");
    }
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

template <class T>
std::vector<T> parse_vector(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  try {
    return j.at(key).get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline json to_json(const GroupSpec& g) {
  return json{{"real_rank", g.real_rank()}, {"int_rank", g.int_rank()}, {"cyclic_orders", g.cyclic_orders()}};
}

inline GroupSpec group_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "group must be a JSON object");
  try {
    return GroupSpec(j.value("real_rank", 0), j.value("int_rank", 0), detail::parse_vector<std::int64_t>(j, "cyclic_orders"));
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

inline json to_json(const GenChar& a) {
  return json{{"z", detail::complex_array(a.z)}, {"w", detail::complex_array(a.w)}, {"dual_residues", a.dual_residues}};
}

/// Missing keys mean "no factors of that kind".
inline GenChar character_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "character must be a JSON object");
  GenChar a;
  if (j.contains("z")) a.z = detail::parse_complex_array(j.at("z"), "z");
  if (j.contains("w")) a.w = detail::parse_complex_array(j.at("w"), "w");
  a.dual_residues = detail::parse_vector<std::int64_t>(j, "dual_residues");
  return a;
}

inline json to_json(const GroupElement& t) {
  return json{{"real", t.real}, {"int", t.ints}, {"residues", t.residues}};
}

inline GroupElement element_from_json(const GroupSpec& g, const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "element must be a JSON object");
  return make_element(g, detail::parse_vector<double>(j, "real"), detail::parse_vector<std::int64_t>(j, "int"),
                      detail::parse_vector<std::int64_t>(j, "residues"));
}

inline json to_json(const CcFunction& f) {
  return json{{"group", to_json(f.group())},     {"real_step", f.real_step()}, {"real_offset", f.real_offset()},
              {"int_offset", f.int_offset()},    {"extents", f.extents()},     {"values", detail::complex_array(f.values())}};
}

inline CcFunction function_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "function must be a JSON object");
  if (!j.contains("group")) throw Error(Errc::Parse, "function is missing 'group'");
  if (!j.contains("values")) throw Error(Errc::Parse, "function is missing 'values'");
  return CcFunction(group_from_json(j.at("group")), detail::parse_vector<double>(j, "real_step"),
                    detail::parse_vector<std::int64_t>(j, "real_offset"),
                    detail::parse_vector<std::int64_t>(j, "int_offset"),
                    detail::parse_vector<std::size_t>(j, "extents"),
                    detail::parse_complex_array(j.at("values"), "values"));
}

inline json to_json(const LemmaCertificate& c) {
  return json{{"m", c.m},   {"eps", c.eps}, {"delta", c.delta}, {"r0", c.r0}, {"r1", c.r1},
              {"n1", c.n1}, {"n2", c.n2},   {"n3", c.n3},       {"N", c.N}};
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, origin + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (buf.str().find_first_not_of(" \t\r\n") == std::string::npos) throw Error(Errc::Parse, path + " is empty");
  return parse_json_text(buf.str(), path);
}

}  // namespace lcachar
