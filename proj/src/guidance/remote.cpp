#include "llmc/guidance/remote.hpp"

#include <cstdlib>
#include <sstream>

#include "httplib.h"
#include "llmc/util/fsio.hpp"

namespace llmc::guidance {

namespace {

// Default templates, used when the prompts directory is absent so the oracle
// works from any working directory.
const char* kDefaultPrioritize =
    "You are guiding a concolic test generator.\n"
    "Source under test:\n{{source}}\n\n"
    "Unexplored branches (one per line, 'id) site depth uncovered : "
    "constraint to flip'):\n{{branches}}\n\n"
    "Reply with JSON only: {\"ranking\": [ids best-first]}.\n";

const char* kDefaultMutate =
    "You are repairing an unsolvable path constraint.\n"
    "Source under test:\n{{source}}\n\n"
    "Path condition atoms (SMT-LIB):\n{{atoms}}\n"
    "Failing atom index: {{failing_index}}\n"
    "Solver verdict on the original query: {{status}}\n"
    "Code context: {{code_context}}\n"
    "Recent concrete input: {{recent_input}}\n\n"
    "Worked examples:\n{{few_shot}}\n\n"
    "Reply with JSON only: {\"edits\": [up to 3 of "
    "{\"op\": \"drop_atom\"|\"widen_eq_to_range\"|\"linearize_product\"|"
    "\"replace_const\", \"index\": n, ...}]}.\n";

const char* kDefaultSynthesize =
    "You are inventing a test input for the function below.\n"
    "Source under test:\n{{source}}\n\n"
    "Entry signature: {{signature}}\n"
    "Coverage so far: {{coverage}}\n"
    "Constants in the source: {{constants}}\n\n"
    "Reply with JSON only: {\"input\": {param: value, ...}}.\n";

std::string load_template(const std::string& dir, const std::string& name,
                          const char* fallback) {
  if (!dir.empty()) {
    try {
      return util::read_file(dir + "/" + name);
    } catch (...) {
    }
  }
  return fallback;
}

void replace_all(std::string& text, const std::string& key, const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
}

std::string render_few_shot(const std::string& dir) {
  std::string raw;
  try {
    raw = util::read_file(dir + "/mutate_fewshot.json");
  } catch (...) {
    return "(none)";
  }
  nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
  if (j.is_discarded() || !j.is_array()) return "(none)";
  std::ostringstream out;
  int n = 0;
  for (const auto& ex : j) {
    if (!ex.is_object()) continue;
    out << "Example " << ++n << ":\n";
    if (ex.contains("atoms")) out << "  atoms: " << ex["atoms"].dump() << "\n";
    if (ex.contains("failing_atom_index"))
      out << "  failing index: " << ex["failing_atom_index"].dump() << "\n";
    if (ex.contains("edits")) out << "  edits: " << ex["edits"].dump() << "\n";
  }
  std::string s = out.str();
  return s.empty() ? "(none)" : s;
}

// Finds the JSON object inside a possibly chatty reply.
std::string extract_json_blob(const std::string& body) {
  nlohmann::json direct = nlohmann::json::parse(body, nullptr, false);
  if (!direct.is_discarded()) return body;
  size_t first = body.find('{');
  size_t last = body.rfind('}');
  if (first == std::string::npos || last == std::string::npos || last <= first)
    return body;
  return body.substr(first, last - first + 1);
}

}  // namespace

RemoteOracle::RemoteOracle(std::string endpoint, std::string prompts_dir,
                           int64_t timeout_ms)
    : prompts_dir_(std::move(prompts_dir)), timeout_ms_(timeout_ms) {
  std::string e = std::move(endpoint);
  if (e.rfind("http://", 0) != 0 && e.rfind("https://", 0) != 0)
    e = "http://" + e;
  size_t scheme_end = e.find("://") + 3;
  size_t slash = e.find('/', scheme_end);
  if (slash == std::string::npos) {
    host_ = e;
    path_ = "/";
  } else {
    host_ = e.substr(0, slash);
    path_ = e.substr(slash);
  }
}

std::string RemoteOracle::render_prompt(const GuidanceRequest& req) const {
  std::string tmpl;
  switch (req.kind) {
    case GuidanceKind::Prioritize:
      tmpl = load_template(prompts_dir_, "prioritize.txt", kDefaultPrioritize);
      break;
    case GuidanceKind::Mutate:
      tmpl = load_template(prompts_dir_, "mutate.txt", kDefaultMutate);
      break;
    case GuidanceKind::Synthesize:
      tmpl = load_template(prompts_dir_, "synthesize.txt", kDefaultSynthesize);
      break;
  }
  replace_all(tmpl, "{{source}}", req.program_source);

  switch (req.kind) {
    case GuidanceKind::Prioritize: {
      std::ostringstream lines;
      for (const auto& it : req.prioritize) {
        lines << it.frontier_id << ") site " << it.site << " depth " << it.depth
              << " uncovered " << it.uncovered_direction_count << " : "
              << it.flip_smtlib << "\n";
      }
      replace_all(tmpl, "{{branches}}", lines.str());
      break;
    }
    case GuidanceKind::Mutate: {
      std::ostringstream lines;
      for (size_t i = 0; i < req.mutate.atoms.size(); ++i) {
        lines << i << ") " << req.mutate.atoms[i];
        if (static_cast<int>(i) == req.mutate.failing_atom_index)
          lines << "   <- failing";
        lines << "\n";
      }
      replace_all(tmpl, "{{atoms}}", lines.str());
      replace_all(tmpl, "{{failing_index}}",
                  std::to_string(req.mutate.failing_atom_index));
      replace_all(tmpl, "{{status}}", req.mutate.status);
      replace_all(tmpl, "{{code_context}}", req.mutate.code_context);
      replace_all(tmpl, "{{recent_input}}",
                  input_to_json(req.mutate.recent_input).dump());
      replace_all(tmpl, "{{few_shot}}", render_few_shot(prompts_dir_));
      break;
    }
    case GuidanceKind::Synthesize: {
      std::ostringstream sig;
      for (size_t i = 0; i < req.synthesize.signature.size(); ++i) {
        if (i) sig << ", ";
        const auto& p = req.synthesize.signature[i];
        sig << p.name << ": " << lang::type_name(p.type);
      }
      replace_all(tmpl, "{{signature}}", sig.str());
      replace_all(tmpl, "{{coverage}}",
                  std::to_string(req.synthesize.covered_directions) + "/" +
                      std::to_string(req.synthesize.total_directions) +
                      " directions covered");
      nlohmann::ordered_json consts;
      consts["ints"] = req.synthesize.int_constants;
      consts["strs"] = req.synthesize.str_constants;
      replace_all(tmpl, "{{constants}}", consts.dump());
      break;
    }
  }
  return tmpl;
}

GuidanceResponse RemoteOracle::call(const GuidanceRequest& req,
                                    const ValidationContext& ctx) {
  ++stats_.calls;

  nlohmann::ordered_json body;
  body["request_id"] = req.request_id().to_hex();
  body["kind"] = guidance_kind_name(req.kind);
  body["prompt"] = render_prompt(req);
  body["payload"] = req.to_json()["payload"];

  httplib::Client client(host_);
  client.set_connection_timeout(0, static_cast<time_t>(timeout_ms_) * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

  httplib::Headers headers;
  if (const char* key = std::getenv("LLMC_API_KEY"); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  ++stats_.network_calls;
  auto res = client.Post(path_, headers, body.dump(), "application/json");

  if (!res || res->status != 200) {
    GuidanceResponse r;
    r.kind = req.kind;
    r.valid = false;
    r.raw = !res ? "transport-error: " + httplib::to_string(res.error())
                 : "transport-error: http status " + std::to_string(res->status);
    return r;
  }

  GuidanceResponse r = parse_response(req.kind, extract_json_blob(res->body), ctx);
  r.raw = res->body;
  return r;
}

GuidanceResponse RemoteOracle::prioritize(const GuidanceRequest& req,
                                          const ValidationContext& ctx) {
  return call(req, ctx);
}

GuidanceResponse RemoteOracle::mutate(const GuidanceRequest& req,
                                      const ValidationContext& ctx) {
  return call(req, ctx);
}

GuidanceResponse RemoteOracle::synthesize(const GuidanceRequest& req,
                                          const ValidationContext& ctx) {
  return call(req, ctx);
}

}  // namespace llmc::guidance
