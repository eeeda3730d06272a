#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

namespace hini {

inline constexpr int kReportVersion = 1;

/// Line-delimited JSON report: a header record
/// {"format":"hini-report","version":1,"kind":...} then one record per line.
class ReportWriter {
 public:
  ReportWriter(std::ostream& out, const std::string& kind) : out_(out) {
    nlohmann::json header{{"format", "hini-report"},
                          {"version", kReportVersion},
                          {"kind", kind}};
    out_ << header.dump() << '\n';
  }

  void record(const nlohmann::json& row) { out_ << row.dump() << '\n'; }

 private:
  std::ostream& out_;
};

}  // namespace hini
