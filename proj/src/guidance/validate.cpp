#include "llmc/guidance/validate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace llmc::guidance {

namespace {

constexpr int kMaxEdits = 3;

bool edit_well_formed(const MutationEdit& e, int atom_count) {
  if (e.index < 0 || e.index >= atom_count) return false;
  switch (e.op) {
    case MutationEdit::Op::DropAtom:
      return true;
    case MutationEdit::Op::WidenEqToRange:
      return e.radius >= 1;
    case MutationEdit::Op::LinearizeProduct:
      return !e.fix_var.empty();
    case MutationEdit::Op::ReplaceConst:
      return true;
  }
  return false;
}

// Coerces a raw value to the declared parameter type; campaigns accept
// out-of-domain values (execution is total), so only the type is enforced.
bool coerce_value(const concolic::Value& v, lang::Type want, concolic::Value& out) {
  switch (want) {
    case lang::Type::Int:
      if (std::holds_alternative<int64_t>(v)) {
        out = v;
        return true;
      }
      if (std::holds_alternative<std::string>(v)) {
        const auto& s = std::get<std::string>(v);
        if (s.empty()) return false;
        try {
          size_t idx = 0;
          int64_t n = std::stoll(s, &idx);
          if (idx != s.size()) return false;
          out = n;
          return true;
        } catch (...) {
          return false;
        }
      }
      return false;
    case lang::Type::Bool:
      if (std::holds_alternative<bool>(v)) {
        out = v;
        return true;
      }
      if (std::holds_alternative<std::string>(v)) {
        const auto& s = std::get<std::string>(v);
        if (s == "true") { out = true; return true; }
        if (s == "false") { out = false; return true; }
      }
      return false;
    case lang::Type::Str:
      if (std::holds_alternative<std::string>(v)) {
        out = v;
        return true;
      }
      return false;
  }
  return false;
}

}  // namespace

bool validate_structural(GuidanceResponse& response, const ValidationContext& ctx) {
  switch (response.kind) {
    case GuidanceKind::Prioritize: {
      std::set<int> known(ctx.frontier_ids.begin(), ctx.frontier_ids.end());
      std::vector<int> cleaned;
      std::set<int> seen;
      for (int id : response.ranking) {
        if (!known.count(id)) continue;  // unknown ids dropped
        if (!seen.insert(id).second) continue;
        cleaned.push_back(id);
      }
      response.ranking = std::move(cleaned);
      response.valid = !response.ranking.empty();
      break;
    }
    case GuidanceKind::Mutate: {
      std::vector<MutationEdit> cleaned;
      bool dropped_any = false;
      for (auto& e : response.edits) {
        if (!edit_well_formed(e, ctx.atom_count)) {
          dropped_any = true;
          continue;
        }
        cleaned.push_back(std::move(e));
        if (static_cast<int>(cleaned.size()) == kMaxEdits) break;
      }
      response.edits = std::move(cleaned);
      // An explicitly empty edit list is a legitimate "no useful repair"
      // answer; a list that only contained malformed edits is not.
      response.valid = !response.edits.empty() || !dropped_any;
      break;
    }
    case GuidanceKind::Synthesize: {
      concolic::ConcreteInput coerced;
      bool ok = true;
      for (const auto& p : ctx.signature) {
        auto it = response.input.find(p.name);
        if (it == response.input.end()) {
          ok = false;
          break;
        }
        concolic::Value v;
        if (!coerce_value(it->second, p.type, v)) {
          ok = false;
          break;
        }
        coerced[p.name] = std::move(v);
      }
      if (ok) {
        response.input = std::move(coerced);  // extras dropped
        response.valid = true;
      } else {
        response.input.clear();
        response.valid = false;
      }
      break;
    }
  }
  return response.valid;
}

GuidanceResponse parse_response(GuidanceKind kind, const std::string& raw,
                                const ValidationContext& ctx) {
  GuidanceResponse r;
  r.kind = kind;
  r.raw = raw;
  r.valid = false;

  nlohmann::json j = nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return r;

  auto json_int = [](const nlohmann::json& v, int64_t& out) {
    if (v.is_number_integer()) {
      out = v.get<int64_t>();
      return true;
    }
    if (v.is_number_float()) {
      double d = v.get<double>();
      if (d == std::floor(d) && std::abs(d) < 9.0e18) {
        out = static_cast<int64_t>(d);
        return true;
      }
    }
    return false;
  };

  switch (kind) {
    case GuidanceKind::Prioritize: {
      if (!j.contains("ranking") || !j["ranking"].is_array()) return r;
      for (const auto& e : j["ranking"]) {
        int64_t id;
        if (json_int(e, id)) r.ranking.push_back(static_cast<int>(id));
      }
      break;
    }
    case GuidanceKind::Mutate: {
      if (!j.contains("edits") || !j["edits"].is_array()) return r;
      for (const auto& je : j["edits"]) {
        if (!je.is_object()) continue;
        if (!je.contains("op") || !je["op"].is_string()) continue;
        std::string op = je["op"].get<std::string>();
        MutationEdit e;
        int64_t n;
        if (!je.contains("index") || !json_int(je["index"], n)) continue;
        e.index = static_cast<int>(n);
        if (op == "drop_atom") {
          e.op = MutationEdit::Op::DropAtom;
        } else if (op == "widen_eq_to_range") {
          e.op = MutationEdit::Op::WidenEqToRange;
          if (!je.contains("radius") || !json_int(je["radius"], e.radius)) continue;
        } else if (op == "linearize_product") {
          e.op = MutationEdit::Op::LinearizeProduct;
          if (!je.contains("fix_var") || !je["fix_var"].is_string()) continue;
          e.fix_var = je["fix_var"].get<std::string>();
          if (!je.contains("fix_value") || !json_int(je["fix_value"], e.fix_value))
            continue;
        } else if (op == "replace_const") {
          e.op = MutationEdit::Op::ReplaceConst;
          if (!je.contains("new_value") || !json_int(je["new_value"], e.new_value))
            continue;
        } else {
          continue;
        }
        if (je.contains("rationale") && je["rationale"].is_string())
          e.rationale = je["rationale"].get<std::string>();
        r.edits.push_back(std::move(e));
      }
      // A genuinely empty list is a decline; a list where nothing survived
      // parsing is a foreign document.
      if (r.edits.empty() && !j["edits"].empty()) return r;
      break;
    }
    case GuidanceKind::Synthesize: {
      if (!j.contains("input") || !j["input"].is_object()) return r;
      for (const auto& [name, v] : j["input"].items()) {
        int64_t n;
        if (v.is_boolean())
          r.input[name] = v.get<bool>();
        else if (json_int(v, n))
          r.input[name] = n;
        else if (v.is_string())
          r.input[name] = v.get<std::string>();
      }
      break;
    }
  }

  validate_structural(r, ctx);
  return r;
}

}  // namespace llmc::guidance
