#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "llmc/guidance/oracle.hpp"

namespace llmc::guidance {

// Records every (request, response) pair a campaign sees, as JSON-lines:
// a header line {"oracle": ..., "created": ...}, then one pair per line.
// Each request_id is written at most once, so the file is a function.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(std::string path, const std::string& oracle_kind);
  ~TranscriptWriter();
  void record(const GuidanceRequest& req, const GuidanceResponse& resp);
  size_t entries() const { return seen_.size(); }

 private:
  std::string path_;
  std::string buffer_;
  std::map<std::string, bool> seen_;
};

struct ReplayMiss : std::runtime_error {
  explicit ReplayMiss(const std::string& what) : std::runtime_error(what) {}
};

// Serves responses from a recorded transcript, byte-identical to the
// original run and with zero network use. A request absent from the
// transcript throws ReplayMiss in strict mode; in lenient mode it is served
// by the deterministic heuristic and counted as a fallback.
class ReplayOracle : public Oracle {
 public:
  ReplayOracle(const std::string& transcript_path, bool lenient);
  std::string kind_name() const override { return "replay"; }
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  GuidanceResponse mutate(const GuidanceRequest& req,
                          const ValidationContext& ctx) override;
  GuidanceResponse synthesize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  const std::string& recorded_oracle_kind() const { return recorded_kind_; }

 private:
  GuidanceResponse serve(const GuidanceRequest& req, const ValidationContext& ctx);

  std::map<std::string, GuidanceResponse> entries_;
  std::string recorded_kind_;
  bool lenient_;
  std::unique_ptr<Oracle> fallback_;
};

}  // namespace llmc::guidance
