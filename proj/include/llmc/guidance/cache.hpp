#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "llmc/guidance/oracle.hpp"

namespace llmc::guidance {

// Persistent request/response store keyed by request_id. JSON-lines on disk:
// {"request_id": "<hex>", "response": {...}} per line. Corrupt lines are
// evicted (dropped from the file) on load, never served.
class GuidanceCache {
 public:
  // Empty path: in-memory only.
  explicit GuidanceCache(std::string path);

  std::optional<GuidanceResponse> lookup(const util::Hash128& id) const;
  void store(const util::Hash128& id, const GuidanceResponse& response);
  size_t size() const;

 private:
  std::string path_;
  std::map<std::string, GuidanceResponse> entries_;
  mutable std::mutex mu_;
};

// Resolves the effective cache file: the explicit config path, else
// $LLMC_CACHE_DIR/guidance_cache.jsonl, else none.
std::string resolve_cache_path(const std::string& configured);

// Serves cached responses and delegates misses to the wrapped oracle.
class CachingOracle : public Oracle {
 public:
  CachingOracle(std::unique_ptr<Oracle> inner, std::shared_ptr<GuidanceCache> cache);
  std::string kind_name() const override;
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  GuidanceResponse mutate(const GuidanceRequest& req,
                          const ValidationContext& ctx) override;
  GuidanceResponse synthesize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  const Oracle& inner() const { return *inner_; }

 private:
  GuidanceResponse serve(const GuidanceRequest& req, const ValidationContext& ctx);

  std::unique_ptr<Oracle> inner_;
  std::shared_ptr<GuidanceCache> cache_;
};

}  // namespace llmc::guidance
