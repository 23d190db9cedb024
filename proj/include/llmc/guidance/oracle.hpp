#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "llmc/guidance/types.hpp"
#include "llmc/guidance/validate.hpp"

namespace llmc::guidance {

struct OracleStats {
  int64_t calls = 0;
  int64_t cache_hits = 0;
  int64_t fallbacks = 0;      // lenient replay misses served by the fallback
  int64_t network_calls = 0;  // remote oracle only
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::string kind_name() const = 0;
  virtual GuidanceResponse prioritize(const GuidanceRequest& req,
                                      const ValidationContext& ctx) = 0;
  virtual GuidanceResponse mutate(const GuidanceRequest& req,
                                  const ValidationContext& ctx) = 0;
  virtual GuidanceResponse synthesize(const GuidanceRequest& req,
                                      const ValidationContext& ctx) = 0;
  const OracleStats& stats() const { return stats_; }

 protected:
  OracleStats stats_;
};

// Identity policy: preserves request order in prioritize, offers no edits
// and no inputs. The engine treats this oracle as absent.
class NullOracle : public Oracle {
 public:
  std::string kind_name() const override { return "null"; }
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  GuidanceResponse mutate(const GuidanceRequest& req,
                          const ValidationContext& ctx) override;
  GuidanceResponse synthesize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
};

struct OracleConfig {
  std::string kind = "null";  // null | heuristic | replay | remote
  std::string endpoint;
  std::string transcript_path;  // replay source
  std::string cache_path;
  std::string prompts_dir = "docs/prompts";
  bool lenient_replay = false;
  int64_t remote_timeout_ms = 10000;
};

// Builds the configured oracle, wiring the cache around the remote kind.
// Throws std::invalid_argument on an unknown kind or a replay config without
// a transcript.
std::unique_ptr<Oracle> make_oracle(const OracleConfig& config);

}  // namespace llmc::guidance
