#include "llmc/bench/manifest.hpp"

#include <filesystem>
#include <set>

#include <json.hpp>

#include "llmc/lang/parser.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::bench {

using nlohmann::json;

namespace {

const std::set<std::string> kCategories = {"nested-branching", "nonlinear",
                                           "string-puzzle", "fintech"};

[[noreturn]] void fail(const std::string& entry, const std::string& why) {
  throw ManifestError(entry + ": " + why);
}

}  // namespace

const BenchEntry* SuiteManifest::find(const std::string& name) const {
  for (const auto& e : programs)
    if (e.name == name) return &e;
  return nullptr;
}

SuiteManifest load_suite(const std::string& manifest_path) {
  std::string text;
  try {
    text = util::read_file(manifest_path);
  } catch (const std::exception& e) {
    throw ManifestError(std::string("cannot read manifest: ") + e.what());
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("programs") ||
      !doc["programs"].is_array())
    throw ManifestError(manifest_path + ": not a suite manifest");

  std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();

  SuiteManifest suite;
  for (const auto& p : doc["programs"]) {
    if (!p.is_object()) fail(manifest_path, "program entry is not an object");
    BenchEntry e;
    try {
      e.path = p.at("path").get<std::string>();
      e.name = p.at("name").get<std::string>();
      e.category = p.at("category").get<std::string>();
      e.branch_sites = p.at("branch_sites").get<int>();
    } catch (const std::exception& ex) {
      fail(p.value("name", std::string("<unnamed>")), ex.what());
    }
    if (!kCategories.count(e.category))
      fail(e.name, "unknown category '" + e.category + "'");
    if (p.contains("feasible_paths") && !p["feasible_paths"].is_null())
      e.feasible_paths = p["feasible_paths"].get<int64_t>();
    e.budget = p.value("budget", int64_t{500});
    e.description = p.value("description", std::string{});
    if (p.contains("domains")) {
      const auto& d = p["domains"];
      solver::DomainConfig dc;
      dc.int_lo = d.value("int_lo", dc.int_lo);
      dc.int_hi = d.value("int_hi", dc.int_hi);
      dc.str_max_len = d.value("str_max_len", dc.str_max_len);
      e.domains = dc;
    }
    e.resolved_path = (base / e.path).string();

    std::string source;
    try {
      source = util::read_file(e.resolved_path);
    } catch (const std::exception& ex) {
      fail(e.name, std::string("cannot read program: ") + ex.what());
    }
    lang::ParseResult parsed = lang::analyze(source);
    if (!parsed.ok())
      fail(e.name, "program does not compile: " +
                       parsed.diagnostics.front().message);
    int actual = parsed.program.num_branch_sites();
    if (actual != e.branch_sites)
      fail(e.name, "audited branch_sites " + std::to_string(e.branch_sites) +
                       " but program has " + std::to_string(actual));

    suite.programs.push_back(std::move(e));
  }
  return suite;
}

}  // namespace llmc::bench
