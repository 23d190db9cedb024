#include "llmc/guidance/types.hpp"

#include <stdexcept>

namespace llmc::guidance {

namespace {

using nlohmann::ordered_json;

}  // namespace

std::string guidance_kind_name(GuidanceKind k) {
  switch (k) {
    case GuidanceKind::Prioritize: return "prioritize";
    case GuidanceKind::Mutate: return "mutate";
    case GuidanceKind::Synthesize: return "synthesize";
  }
  return "prioritize";
}

std::string mutation_op_name(MutationEdit::Op op) {
  switch (op) {
    case MutationEdit::Op::DropAtom: return "drop_atom";
    case MutationEdit::Op::WidenEqToRange: return "widen_eq_to_range";
    case MutationEdit::Op::LinearizeProduct: return "linearize_product";
    case MutationEdit::Op::ReplaceConst: return "replace_const";
  }
  return "drop_atom";
}

nlohmann::ordered_json value_to_json(const concolic::Value& v) {
  if (std::holds_alternative<int64_t>(v)) return std::get<int64_t>(v);
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  return std::get<std::string>(v);
}

nlohmann::ordered_json input_to_json(const concolic::ConcreteInput& in) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, value] : in) j[name] = value_to_json(value);
  return j;
}

nlohmann::ordered_json MutationEdit::to_json() const {
  ordered_json j;
  j["op"] = mutation_op_name(op);
  j["index"] = index;
  switch (op) {
    case Op::DropAtom:
      break;
    case Op::WidenEqToRange:
      j["radius"] = radius;
      break;
    case Op::LinearizeProduct:
      j["fix_var"] = fix_var;
      j["fix_value"] = fix_value;
      break;
    case Op::ReplaceConst:
      j["new_value"] = new_value;
      break;
  }
  if (!rationale.empty()) j["rationale"] = rationale;
  return j;
}

nlohmann::ordered_json GuidanceRequest::to_json() const {
  ordered_json j;
  j["kind"] = guidance_kind_name(kind);
  j["program_source"] = program_source;
  ordered_json payload = ordered_json::object();
  switch (kind) {
    case GuidanceKind::Prioritize: {
      ordered_json items = ordered_json::array();
      for (const auto& it : prioritize) {
        ordered_json e;
        e["frontier_id"] = it.frontier_id;
        e["site"] = it.site;
        e["depth"] = it.depth;
        e["flip_smtlib"] = it.flip_smtlib;
        e["uncovered_direction_count"] = it.uncovered_direction_count;
        items.push_back(std::move(e));
      }
      payload["frontiers"] = std::move(items);
      break;
    }
    case GuidanceKind::Mutate: {
      payload["atoms"] = mutate.atoms;
      payload["failing_atom_index"] = mutate.failing_atom_index;
      payload["status"] = mutate.status;
      payload["code_context"] = mutate.code_context;
      payload["recent_input"] = input_to_json(mutate.recent_input);
      break;
    }
    case GuidanceKind::Synthesize: {
      ordered_json sig = ordered_json::array();
      for (const auto& p : synthesize.signature) {
        ordered_json e;
        e["name"] = p.name;
        e["type"] = lang::type_name(p.type);
        sig.push_back(std::move(e));
      }
      payload["signature"] = std::move(sig);
      payload["covered_directions"] = synthesize.covered_directions;
      payload["total_directions"] = synthesize.total_directions;
      payload["int_constants"] = synthesize.int_constants;
      payload["str_constants"] = synthesize.str_constants;
      payload["attempt"] = synthesize.attempt;
      break;
    }
  }
  j["payload"] = std::move(payload);
  return j;
}

util::Hash128 GuidanceRequest::request_id() const {
  std::string canon = to_json().dump();
  return util::hash128(canon.data(), canon.size());
}

nlohmann::ordered_json GuidanceResponse::to_json() const {
  ordered_json j;
  j["kind"] = guidance_kind_name(kind);
  j["valid"] = valid;
  switch (kind) {
    case GuidanceKind::Prioritize:
      j["ranking"] = ranking;
      break;
    case GuidanceKind::Mutate: {
      ordered_json es = ordered_json::array();
      for (const auto& e : edits) es.push_back(e.to_json());
      j["edits"] = std::move(es);
      break;
    }
    case GuidanceKind::Synthesize:
      j["input"] = input_to_json(input);
      break;
  }
  if (!raw.empty()) j["raw"] = raw;
  return j;
}

GuidanceResponse response_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::runtime_error("guidance response: missing kind");
  GuidanceResponse r;
  std::string kind = j["kind"].get<std::string>();
  if (kind == "prioritize") {
    r.kind = GuidanceKind::Prioritize;
    if (!j.contains("ranking") || !j["ranking"].is_array())
      throw std::runtime_error("guidance response: missing ranking");
    for (const auto& e : j["ranking"]) {
      if (!e.is_number_integer())
        throw std::runtime_error("guidance response: ranking entry not an id");
      r.ranking.push_back(e.get<int>());
    }
  } else if (kind == "mutate") {
    r.kind = GuidanceKind::Mutate;
    if (!j.contains("edits") || !j["edits"].is_array())
      throw std::runtime_error("guidance response: missing edits");
    for (const auto& je : j["edits"]) {
      if (!je.is_object() || !je.contains("op") || !je["op"].is_string())
        throw std::runtime_error("guidance response: bad edit");
      MutationEdit e;
      std::string op = je["op"].get<std::string>();
      auto want_int = [&](const char* key) -> int64_t {
        if (!je.contains(key) || !je[key].is_number_integer())
          throw std::runtime_error("guidance response: bad edit field");
        return je[key].get<int64_t>();
      };
      e.index = static_cast<int>(want_int("index"));
      if (op == "drop_atom") {
        e.op = MutationEdit::Op::DropAtom;
      } else if (op == "widen_eq_to_range") {
        e.op = MutationEdit::Op::WidenEqToRange;
        e.radius = want_int("radius");
      } else if (op == "linearize_product") {
        e.op = MutationEdit::Op::LinearizeProduct;
        if (!je.contains("fix_var") || !je["fix_var"].is_string())
          throw std::runtime_error("guidance response: bad edit field");
        e.fix_var = je["fix_var"].get<std::string>();
        e.fix_value = want_int("fix_value");
      } else if (op == "replace_const") {
        e.op = MutationEdit::Op::ReplaceConst;
        e.new_value = want_int("new_value");
      } else {
        throw std::runtime_error("guidance response: unknown edit op");
      }
      if (je.contains("rationale") && je["rationale"].is_string())
        e.rationale = je["rationale"].get<std::string>();
      r.edits.push_back(std::move(e));
    }
  } else if (kind == "synthesize") {
    r.kind = GuidanceKind::Synthesize;
    if (!j.contains("input") || !j["input"].is_object())
      throw std::runtime_error("guidance response: missing input");
    for (const auto& [name, v] : j["input"].items()) {
      if (v.is_number_integer())
        r.input[name] = v.get<int64_t>();
      else if (v.is_boolean())
        r.input[name] = v.get<bool>();
      else if (v.is_string())
        r.input[name] = v.get<std::string>();
      else
        throw std::runtime_error("guidance response: bad input value");
    }
  } else {
    throw std::runtime_error("guidance response: unknown kind");
  }
  if (j.contains("valid") && j["valid"].is_boolean())
    r.valid = j["valid"].get<bool>();
  else
    r.valid = true;
  if (j.contains("raw") && j["raw"].is_string())
    r.raw = j["raw"].get<std::string>();
  return r;
}

}  // namespace llmc::guidance
