#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hwp/factor.hpp"

namespace hwp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
/// Declared in every factorization file so that external checkers know how
/// rows of a row-sum matrix were laid onto the edge layers.
inline constexpr const char* kLayerConvention =
    "row entry s[g-1-i] labels layer i (columns i to i+1); cycles walk columns downwards";

namespace detail {
inline void check_schema(const Json& j, const std::string& what) {
  if (!j.is_object()) throw InvalidArgument(what + ": expected a JSON object");
  if (!j.contains("schema") || j["schema"] != kSchemaVersion)
    throw InvalidArgument(what + ": missing or unsupported schema version");
}
}  // namespace detail

// ---- row-sum matrices --------------------------------------------------------

inline std::string support_tag(const RowSumMatrix& m) {
  if (m.support.size() == m.group.order()) return "full";
  if (m.group.is_dihedral()) {
    auto split = two_gamma(m.group);
    if (m.support == split.subgroup) return "2gamma";
    if (m.support == split.coset) return "coset";
  }
  return "";
}

inline Json rsm_to_json(const RowSumMatrix& m) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["group"] = m.group.descriptor();
  if (auto tag = support_tag(m); !tag.empty()) {
    j["support"] = tag;
  } else {
    Json s = Json::array();
    for (Elem e : m.support) s.push_back(m.group.format(e));
    j["support"] = s;
  }
  j["g"] = m.g;
  Json rows = Json::array();
  for (const auto& r : m.rows) {
    Json row = Json::array();
    for (Elem e : r) row.push_back(m.group.format(e));
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

inline RowSumMatrix rsm_from_json(const Json& j) {
  detail::check_schema(j, "rsm");
  try {
    Group grp = Group::parse(j.at("group").get<std::string>());
    RowSumMatrix m{grp, {}, j.at("g").get<std::size_t>(), {}};
    const Json& s = j.at("support");
    if (s.is_string()) {
      const std::string tag = s.get<std::string>();
      if (tag == "full") m.support = grp.elements();
      else if (tag == "2gamma") m.support = two_gamma(grp).subgroup;
      else if (tag == "coset") m.support = two_gamma(grp).coset;
      else throw InvalidArgument("rsm: unknown support '" + tag + "'");
    } else {
      for (const auto& e : s) m.support.push_back(grp.parse_element(e.get<std::string>()));
      std::sort(m.support.begin(), m.support.end());
    }
    for (const auto& row : j.at("rows")) {
      std::vector<Elem> r;
      for (const auto& e : row) r.push_back(grp.parse_element(e.get<std::string>()));
      m.rows.push_back(std::move(r));
    }
    return m;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("rsm: malformed JSON: ") + e.what());
  }
}

// ---- factorizations ----------------------------------------------------------

inline Json factors_to_json(const TwoFactorization& f) {
  Json arr = Json::array();
  for (const auto& x : f.factors) {
    Json cycles = Json::array();
    for (const auto& c : x.cycles) cycles.push_back(c);
    arr.push_back({{"cycle_length", x.cycle_length()}, {"cycles", cycles}});
  }
  return arr;
}

inline TwoFactorization factors_from_json(const Json& arr) {
  TwoFactorization f;
  for (const auto& x : arr) {
    TwoFactor tf;
    const std::size_t len = x.at("cycle_length").get<std::size_t>();
    for (const auto& c : x.at("cycles")) tf.cycles.push_back(c.get<Cycle>());
    for (const auto& c : tf.cycles)
      if (c.size() != len) throw InvalidArgument("factor declares cycle length " + std::to_string(len) + " but has a cycle of length " + std::to_string(c.size()));
    f.factors.push_back(std::move(tf));
  }
  return f;
}

struct FactorizationFile {
  std::string graph;
  TwoFactorization factorization;
};

inline Json factorization_to_json(const Graph& graph, const TwoFactorization& f) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["graph"] = graph.descriptor();
  if (graph.kind() == GraphKind::Cayley) j["convention"] = kLayerConvention;
  j["factors"] = factors_to_json(f);
  return j;
}

inline FactorizationFile factorization_from_json(const Json& j) {
  detail::check_schema(j, "factorization");
  try {
    return {j.at("graph").get<std::string>(), factors_from_json(j.at("factors"))};
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("factorization: malformed JSON: ") + e.what());
  }
}

// ---- files -------------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

}  // namespace hwp
