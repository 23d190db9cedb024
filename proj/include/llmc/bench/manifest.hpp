#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llmc/solver/query.hpp"

namespace llmc::bench {

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BenchEntry {
  std::string path;           // as written in the manifest
  std::string resolved_path;  // joined with the manifest's directory
  std::string name;
  std::string category;  // nested-branching | nonlinear | string-puzzle | fintech
  int branch_sites = 0;  // hand-audited; re-checked against the parser at load
  std::optional<int64_t> feasible_paths;  // set only when exhaustively enumerable
  int64_t budget = 500;
  std::string description;
  std::optional<solver::DomainConfig> domains;
};

struct SuiteManifest {
  std::vector<BenchEntry> programs;

  const BenchEntry* find(const std::string& name) const;
};

// Loads the manifest, parses and typechecks every listed program, and
// verifies the audited branch-site counts. Throws ManifestError naming the
// offending entry on any mismatch.
SuiteManifest load_suite(const std::string& manifest_path);

}  // namespace llmc::bench
