#pragma once

// CSV and JSON export. Doubles are written in shortest round-trip form;
// non-finite values as the strings "inf", "-inf" and "nan".

#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qvlab/audit.hpp"
#include "qvlab/branch.hpp"
#include "qvlab/disk2d.hpp"
#include "qvlab/func1d.hpp"

namespace qvlab::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw DomainError("parse_double: bad number '" + s + "'");
  return v;
}

inline nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline nlohmann::json num_array(const std::vector<double>& v) {
  auto arr = nlohmann::json::array();
  for (double x : v) arr.push_back(num(x));
  return arr;
}

inline void write_report_csv(std::ostream& os, const MinimalityReport& rep) {
  os << "center,radius,dir_u,dir_min,figure_of_merit\n";
  for (const auto& r : rep.records)
    os << format_double(r.center) << ',' << format_double(r.radius) << ',' << format_double(r.dir_u) << ','
       << format_double(r.dir_min) << ',' << format_double(r.figure) << '\n';
}

inline nlohmann::json record_json(const AuditRecord& r) {
  return {{"center", num(r.center)},
          {"radius", num(r.radius)},
          {"dir_u", num(r.dir_u)},
          {"dir_min", num(r.dir_min)},
          {"figure_of_merit", num(r.figure)}};
}

inline nlohmann::json report_json(const MinimalityReport& rep, bool include_records = true) {
  nlohmann::json j;
  j["mode"] = to_string(rep.mode);
  j["alpha"] = rep.mode == AuditMode::almost ? num(rep.alpha) : nlohmann::json(nullptr);
  j["supremum"] = num(rep.supremum);
  j["record_count"] = rep.records.size();
  j["witness"] = rep.witness ? record_json(rep.witness_record()) : nlohmann::json(nullptr);
  if (include_records) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rep.records) arr.push_back(record_json(r));
    j["records"] = std::move(arr);
  }
  return j;
}

/// x, branch_1..branch_Q at every breakpoint.
inline void write_function_csv(std::ostream& os, const PiecewiseAffineQ& u) {
  os << 'x';
  for (std::size_t i = 1; i <= u.q(); ++i) os << ",branch_" << i;
  os << '\n';
  for (std::size_t k = 0; k < u.breakpoints().size(); ++k) {
    os << format_double(u.breakpoints()[k]);
    for (double y : u.values_at(k)) os << ',' << format_double(y);
    os << '\n';
  }
}

inline void write_scan_csv(std::ostream& os, const BranchScan& s) {
  os << "x,sigma,flagged\n";
  for (std::size_t k = 0; k < s.grid.size(); ++k)
    os << format_double(s.grid[k]) << ',' << s.sigma[k] << ',' << (s.flagged[k] ? 1 : 0) << '\n';
}

inline nlohmann::json dimension_json(const DimensionReport& d) {
  return {{"scales", num_array(d.scales)},
          {"counts", d.counts},
          {"slope", num(d.fit.slope)},
          {"r2", num(d.fit.r_squared)}};
}

inline nlohmann::json decay_json(const DecayFit& d) {
  return {{"scales", num_array(d.scales)},
          {"energies", num_array(d.energies)},
          {"slope", num(d.fit.slope)},
          {"r2", num(d.fit.r_squared)}};
}

inline nlohmann::json disk_json(const disk::DiskMinimizer& m, const disk::SqueezeCheck& sq) {
  const auto& t = m.trace;
  nlohmann::json j;
  j["radius"] = num(t.radius);
  j["q"] = t.q;
  j["samples"] = t.samples;
  j["modes"] = t.modes;
  std::vector<double> angles(t.samples);
  for (std::size_t s = 0; s < t.samples; ++s) angles[s] = t.angle(s);
  j["angles"] = num_array(angles);
  auto branches = nlohmann::json::array();
  for (std::size_t i = 0; i < t.q; ++i) {
    std::vector<double> col(t.samples);
    for (std::size_t s = 0; s < t.samples; ++s) col[s] = t.value(s, i);
    const auto& br = t.branches[i];
    branches.push_back({{"samples", num_array(col)}, {"a0", num(br.a0)}, {"a", num_array(br.a)}, {"b", num_array(br.b)}});
  }
  j["branches"] = std::move(branches);
  j["dir_interior"] = num(m.dir_interior);
  j["dir_boundary"] = num(m.dir_boundary);
  j["upper_half_energy"] = num(m.upper_half_energy);
  j["squeeze"] = {{"holds", sq.holds}, {"lhs", num(sq.lhs)}, {"rhs", num(sq.rhs)}, {"margin", num(sq.margin)}};
  return j;
}

}  // namespace qvlab::io
