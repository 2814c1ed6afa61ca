#pragma once

// Text serialization: curves as JSON, line realizations and flow estimates
// as CSV, validation reports as JSON. Doubles are written in shortest
// round-trip form.

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "pcity/curve.hpp"
#include "pcity/errors.hpp"
#include "pcity/estimator.hpp"
#include "pcity/oracle.hpp"
#include "pcity/validation.hpp"

namespace pcity {

inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last) throw InvalidInput("not a number: '" + text + "'");
  return x;
}

// ---------------------------------------------------------------------------
// Curves

inline nlohmann::json curve_to_json(const SeminalCurve& curve) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CurveVertex& v : curve.vertices()) {
    arr.push_back({{"n", v.n}, {"S", v.S}, {"Y", v.Y}, {"sigma", v.sigma}});
  }
  return arr;
}

inline SeminalCurve curve_from_json(const nlohmann::json& arr, Orientation orientation = Orientation::right) {
  if (!arr.is_array() || arr.empty()) throw InvalidInput("curve JSON must be a non-empty array");
  std::vector<CurveVertex> vs;
  try {
    for (const auto& item : arr) {
      CurveVertex v;
      v.n = item.at("n").get<std::size_t>();
      v.S = item.at("S").get<double>();
      v.Y = item.at("Y").get<double>();
      v.sigma = item.at("sigma").get<double>();
      vs.push_back(v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("curve JSON: ") + e.what());
  }
  return SeminalCurve::from_vertices(std::move(vs), orientation);
}

inline void write_curve_json(std::ostream& os, const SeminalCurve& curve) { os << curve_to_json(curve).dump() << '\n'; }

inline SeminalCurve read_curve_json(std::istream& is, Orientation orientation = Orientation::right) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("curve JSON: ") + e.what());
  }
  return curve_from_json(j, orientation);
}

// ---------------------------------------------------------------------------
// Lines

inline void write_lines_csv(std::ostream& os, const std::vector<Line>& lines) {
  os << "sigma,b\n";
  for (const Line& l : lines) os << format_double(l.sigma) << ',' << format_double(l.b) << '\n';
}

inline std::vector<Line> read_lines_csv(std::istream& is) {
  std::string row;
  if (!std::getline(is, row)) throw InvalidInput("line CSV: missing header");
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != "sigma,b") throw InvalidInput("line CSV: expected header 'sigma,b'");
  std::vector<Line> lines;
  while (std::getline(is, row)) {
    if (row.empty() || row == "\r") continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos) throw InvalidInput("line CSV: malformed row '" + row + "'");
    lines.push_back({parse_double(row.substr(0, comma)), parse_double(row.substr(comma + 1))});
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Flow estimates

inline constexpr const char* kFlowCsvHeader = "replicate_id,N,value,bracket_width,l1_bound,product_term,sum_plus,sum_minus";

inline void write_flow_row(std::ostream& os, std::size_t replicate_id, const FlowEstimate& e) {
  os << replicate_id << ',' << e.N << ',' << format_double(e.value) << ',' << format_double(e.bracket_width) << ','
     << format_double(e.l1_bound) << ',' << format_double(e.product_term) << ',' << format_double(e.sum_plus) << ','
     << format_double(e.sum_minus) << '\n';
}

inline nlohmann::json flow_to_json(std::size_t replicate_id, const FlowEstimate& e) {
  return {{"replicate_id", replicate_id}, {"N", e.N},
          {"value", e.value},            {"bracket_width", e.bracket_width},
          {"l1_bound", e.l1_bound},      {"product_term", e.product_term},
          {"sum_plus", e.sum_plus},      {"sum_minus", e.sum_minus}};
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json report_to_json(const TestReport& r) {
  return {{"name", r.name},           {"statistic", r.statistic}, {"threshold", r.threshold},
          {"n_samples", r.n_samples}, {"passed", r.passed},       {"seed", r.seed}};
}

inline nlohmann::json reports_to_json(const std::vector<TestReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TestReport& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

}  // namespace pcity
