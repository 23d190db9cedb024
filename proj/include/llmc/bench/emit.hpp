#pragma once

#include <string>

#include "llmc/bench/compare.hpp"

namespace llmc::bench {

// RFC-4180 quoting: wraps the field when it contains a comma, quote, or
// newline, doubling embedded quotes.
std::string csv_quote(const std::string& field);

// Each emitter creates out_dir if needed, writes atomically, and returns the
// path written.
std::string emit_json(const ComparisonReport& report, const std::string& out_dir);
std::string emit_csv(const ComparisonReport& report, const std::string& out_dir);
std::string emit_plotdata(const ComparisonReport& report, const std::string& out_dir);

void emit_all(const ComparisonReport& report, const std::string& out_dir);

}  // namespace llmc::bench
