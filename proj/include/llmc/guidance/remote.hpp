#pragma once

#include "llmc/guidance/oracle.hpp"

namespace llmc::guidance {

// Talks to an HTTP endpoint speaking the guidance wire protocol: POST a JSON
// body {request_id, kind, prompt, payload}; the endpoint answers with the
// kind-matched response object. The bearer credential comes from the
// LLMC_API_KEY environment variable. Transport failures and malformed
// replies both surface as valid=false — never as engine errors.
class RemoteOracle : public Oracle {
 public:
  RemoteOracle(std::string endpoint, std::string prompts_dir, int64_t timeout_ms);
  std::string kind_name() const override { return "remote"; }
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  GuidanceResponse mutate(const GuidanceRequest& req,
                          const ValidationContext& ctx) override;
  GuidanceResponse synthesize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;

  // Exposed for tests: the exact prompt a request produces.
  std::string render_prompt(const GuidanceRequest& req) const;

 private:
  GuidanceResponse call(const GuidanceRequest& req, const ValidationContext& ctx);

  std::string host_;  // scheme://host:port
  std::string path_;  // request path, default "/"
  std::string prompts_dir_;
  int64_t timeout_ms_;
};

}  // namespace llmc::guidance
