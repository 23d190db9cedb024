#include "llmc/bench/emit.hpp"

#include <cstdio>
#include <filesystem>

#include "llmc/util/fsio.hpp"

namespace llmc::bench {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string out_path(const std::string& out_dir, const char* file) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / file).string();
}

}  // namespace

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string emit_json(const ComparisonReport& report, const std::string& out_dir) {
  std::string path = out_path(out_dir, "comparison.json");
  util::atomic_write_file(path, report.to_json().dump(2) + "\n");
  return path;
}

std::string emit_csv(const ComparisonReport& report, const std::string& out_dir) {
  std::string text =
      "program,category,strategy,branch_coverage,path_count,findings,"
      "budget_consumed,solver_invocations,solver_timeouts,"
      "iterations_to_target,error\n";
  for (const auto& c : report.cells) {
    text += csv_quote(c.program) + "," + csv_quote(c.category) + "," +
            csv_quote(c.strategy) + ",";
    text += fmt6(c.report.branch_coverage) + ",";
    text += std::to_string(c.report.path_count) + ",";
    text += std::to_string(c.report.findings.size()) + ",";
    text += std::to_string(c.report.budget_consumed) + ",";
    text += std::to_string(c.report.solver.invocations) + ",";
    text += std::to_string(c.report.solver.timeouts()) + ",";
    text += c.iterations_to_target ? std::to_string(*c.iterations_to_target)
                                   : std::string{};
    text += "," + csv_quote(c.error) + "\n";
  }
  std::string path = out_path(out_dir, "comparison.csv");
  util::atomic_write_file(path, text);
  return path;
}

std::string emit_plotdata(const ComparisonReport& report,
                          const std::string& out_dir) {
  std::string text = "program\tstrategy\titeration\twallclock_ms\tbranch_coverage\n";
  for (const auto& c : report.cells) {
    for (const auto& p : c.report.curve) {
      text += c.program + "\t" + c.strategy + "\t" +
              std::to_string(p.iteration) + "\t" +
              std::to_string(p.wallclock_ms) + "\t" +
              fmt6(p.branch_coverage) + "\n";
    }
  }
  std::string path = out_path(out_dir, "coverage_curves.tsv");
  util::atomic_write_file(path, text);
  return path;
}

void emit_all(const ComparisonReport& report, const std::string& out_dir) {
  emit_json(report, out_dir);
  emit_csv(report, out_dir);
  emit_plotdata(report, out_dir);
}

}  // namespace llmc::bench
