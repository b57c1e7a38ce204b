#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/hardy_engine.hpp"

namespace hardy {

struct ReportRow {
  std::size_t run = 0;
  std::size_t u_index = 0;
  InequalityReport report;
};

inline constexpr const char* kCsvHeader = "statement,group,beta,p,lhs,rhs_total,slack,err_est,verdict";

/// Round-trip decimal form (17 significant digits).
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& r = row.report;
    os << csv_escape(r.statement) << ',' << csv_escape(r.group) << ',' << format_number(r.beta) << ','
       << format_number(r.p) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs_total) << ','
       << format_number(r.slack) << ',' << format_number(r.err_est) << ',' << r.verdict() << '\n';
  }
}

inline nlohmann::json report_to_json(const ReportRow& row) {
  const auto& r = row.report;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.rhs_terms)
    terms.push_back({{"name", t.name},
                     {"coefficient", t.coefficient},
                     {"integral", t.integral},
                     {"integral_error", t.integral_error},
                     {"value", t.value()}});
  return {{"run", row.run},
          {"u_index", row.u_index},
          {"statement", r.statement},
          {"group", r.group},
          {"beta", r.beta},
          {"p", r.p},
          {"rule", r.rule},
          {"lhs_name", r.lhs_name},
          {"lhs", r.lhs},
          {"lhs_error", r.lhs_error},
          {"rhs_terms", terms},
          {"rhs_total", r.rhs_total},
          {"slack", r.slack},
          {"err_est", r.err_est},
          {"verdict", std::string(r.verdict())}};
}

inline void write_json(std::ostream& os, const std::vector<ReportRow>& rows) {
  nlohmann::json out = {{"reports", nlohmann::json::array()}};
  for (const auto& row : rows) out["reports"].push_back(report_to_json(row));
  os << out.dump(2) << '\n';
}

}  // namespace hardy
