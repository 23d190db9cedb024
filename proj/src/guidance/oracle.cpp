#include "llmc/guidance/oracle.hpp"

#include <stdexcept>

#include "llmc/guidance/cache.hpp"
#include "llmc/guidance/heuristic.hpp"
#include "llmc/guidance/remote.hpp"
#include "llmc/guidance/transcript.hpp"

namespace llmc::guidance {

GuidanceResponse NullOracle::prioritize(const GuidanceRequest& req,
                                        const ValidationContext& ctx) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Prioritize;
  for (const auto& it : req.prioritize) r.ranking.push_back(it.frontier_id);
  validate_structural(r, ctx);
  return r;
}

GuidanceResponse NullOracle::mutate(const GuidanceRequest&, const ValidationContext&) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Mutate;
  r.valid = false;
  return r;
}

GuidanceResponse NullOracle::synthesize(const GuidanceRequest&,
                                        const ValidationContext&) {
  ++stats_.calls;
  GuidanceResponse r;
  r.kind = GuidanceKind::Synthesize;
  r.valid = false;
  return r;
}

std::unique_ptr<Oracle> make_oracle(const OracleConfig& config) {
  if (config.kind == "null") return std::make_unique<NullOracle>();
  if (config.kind == "heuristic") return std::make_unique<HeuristicOracle>();
  if (config.kind == "replay") {
    if (config.transcript_path.empty())
      throw std::invalid_argument("replay oracle requires a transcript path");
    return std::make_unique<ReplayOracle>(config.transcript_path,
                                          config.lenient_replay);
  }
  if (config.kind == "remote") {
    if (config.endpoint.empty())
      throw std::invalid_argument("remote oracle requires an endpoint");
    auto remote = std::make_unique<RemoteOracle>(
        config.endpoint, config.prompts_dir, config.remote_timeout_ms);
    std::string cache_path = resolve_cache_path(config.cache_path);
    auto cache = std::make_shared<GuidanceCache>(cache_path);
    return std::make_unique<CachingOracle>(std::move(remote), std::move(cache));
  }
  throw std::invalid_argument("unknown oracle kind: " + config.kind);
}

}  // namespace llmc::guidance
