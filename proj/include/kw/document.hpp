#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kw/map.hpp"

namespace kw {

// The repository's one persistent format: a self-describing JSON document
// with exact angle fractions. Angles are never serialized as floats.
struct MapDocument {
  int darts = 0;
  std::vector<int> reversal;
  std::vector<int> rotation;
  std::vector<std::pair<long long, long long>> theta;  // {num, den} per edge
  std::optional<std::vector<std::string>> weights;     // decimal strings per edge
  std::optional<std::string> name;
};

inline std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

inline MapDocument document_from_map(const IsoradialMap& m,
                                     const std::optional<std::vector<double>>& weights = {},
                                     const std::optional<std::string>& name = {}) {
  MapDocument doc;
  doc.darts = m.n_darts;
  doc.reversal = m.rev;
  doc.rotation = m.rot;
  for (const AnglePi& t : m.theta) doc.theta.emplace_back(t.units().num(), t.units().den());
  if (weights) {
    std::vector<std::string> ws;
    for (double w : *weights) ws.push_back(format_weight(w));
    doc.weights = std::move(ws);
  }
  doc.name = name;
  return doc;
}

// Canonical serialization: fixed key order, two-space indent, trailing
// newline. read/write round-trips byte-exactly on canonicalized documents.
inline std::string write_document(const MapDocument& doc) {
  nlohmann::ordered_json j;
  j["darts"] = doc.darts;
  j["reversal"] = doc.reversal;
  j["rotation"] = doc.rotation;
  nlohmann::ordered_json th = nlohmann::ordered_json::array();
  for (auto& [num, den] : doc.theta) th.push_back({{"num", num}, {"den", den}});
  j["theta"] = th;
  if (doc.weights) j["weights"] = *doc.weights;
  if (doc.name) j["name"] = *doc.name;
  return j.dump(2) + "\n";
}

inline MapDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
  MapDocument doc;
  try {
    if (!j.is_object() || !j.contains("darts") || !j.contains("reversal") ||
        !j.contains("rotation") || !j.contains("theta"))
      fail(Errc::parse_error, "missing required field (darts/reversal/rotation/theta)");
    doc.darts = j.at("darts").get<int>();
    doc.reversal = j.at("reversal").get<std::vector<int>>();
    doc.rotation = j.at("rotation").get<std::vector<int>>();
    for (const auto& t : j.at("theta")) {
      doc.theta.emplace_back(t.at("num").get<long long>(), t.at("den").get<long long>());
    }
    if (j.contains("weights"))
      doc.weights = j.at("weights").get<std::vector<std::string>>();
    if (j.contains("name")) doc.name = j.at("name").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
  return doc;
}

// Validation is identical to build_isoradial_map; all build errors pass
// through.
inline IsoradialMap read_map(const MapDocument& doc) {
  if (doc.darts <= 0 || doc.darts % 2 != 0)
    fail(Errc::parse_error, "darts must be a positive even integer");
  if (doc.darts > kMaxDarts) fail(Errc::size_overflow, "document exceeds the dart limit");
  std::vector<AnglePi> theta;
  for (auto& [num, den] : doc.theta) {
    if (den <= 0) fail(Errc::parse_error, "theta denominator must be positive");
    theta.push_back(AnglePi::of(num, den));
  }
  return build_isoradial_map(doc.darts, doc.reversal, doc.rotation, std::move(theta));
}

inline std::vector<double> parse_weights(const MapDocument& doc) {
  std::vector<double> w;
  if (!doc.weights) return w;
  for (const std::string& s : *doc.weights) {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad weight literal: " + s);
    }
    if (pos != s.size()) fail(Errc::parse_error, "bad weight literal: " + s);
    w.push_back(v);
  }
  return w;
}

}  // namespace kw
