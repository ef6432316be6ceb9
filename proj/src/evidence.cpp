#include "probcomb/evidence.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_set>

#include "json.hpp"
#include "probcomb/errors.hpp"

namespace probcomb::evidence {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(errc::document_invalid, message);
}

void require_known_keys(const json& obj,
                        std::initializer_list<const char*> allowed,
                        const char* where) {
  for (const auto& [key, unused] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      invalid(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

Probability number_to_probability(const json& v, Mode mode,
                                  const std::string& where) {
  if (!v.is_number()) {
    invalid(where + " must be a number");
  }
  const double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) {
    invalid(where + " must lie in [0,1], got " + v.dump());
  }
  switch (mode) {
    case Mode::Floating:
      return Probability::floating(d);
    case Mode::LogComplement:
      return Probability::floating(d).to_mode(Mode::LogComplement);
    case Mode::ExactRational:
      // Honor the decimal the author wrote (0.4 means 2/5), not the
      // binary expansion of its double image.
      return Probability::exact(decimal_value_of(d));
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

std::string describe(const Probability& p) { return to_display_string(p); }

}  // namespace

ValidationResult validate_semantic_independence(
    std::span<const Evidence> items) {
  ValidationResult result;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].kind != EvidenceKind::WeightBearing) continue;
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[j].kind != EvidenceKind::WeightBearing) continue;
      std::vector<SemanticTag> shared;
      std::set_intersection(items[i].tags.begin(), items[i].tags.end(),
                            items[j].tags.begin(), items[j].tags.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) {
        TagOverlap overlap{items[i].id, items[j].id, {}};
        for (auto& tag : shared) overlap.shared_tags.push_back(tag.name);
        result.violations.push_back(std::move(overlap));
      }
    }
  }
  return result;
}

CombinationResult combine_document(const EvidenceDocument& doc) {
  for (const auto& item : doc.items) {
    if (item.kind == EvidenceKind::Extensional) {
      throw Error(errc::extensional_evidence_rejected,
                  "item '" + item.id +
                      "' delimits the case space and may not be combined");
    }
  }
  const ValidationResult validation =
      validate_semantic_independence(doc.items);
  if (!validation.ok()) {
    std::string message = "overlapping evidence channels:";
    for (const auto& v : validation.violations) {
      message += " [" + v.first_id + ", " + v.second_id + ":";
      for (const auto& tag : v.shared_tags) message += " " + tag;
      message += "]";
    }
    throw Error(errc::semantic_overlap, message);
  }

  CombinationResult result;
  std::vector<Probability> operands;
  if (doc.prior) {
    operands.push_back(*doc.prior);
    result.audit.push_back("prior = " + describe(*doc.prior));
  }
  for (const auto& item : doc.items) {
    if (item.conditional_on_carrier) {
      const auto& c = *item.conditional_on_carrier;
      Probability conferred = product({c.carrier_prior, c.transfer});
      result.audit.push_back("item '" + item.id + "' = carrier " +
                             describe(c.carrier_prior) + " * transfer " +
                             describe(c.transfer) + " = " +
                             describe(conferred));
      operands.push_back(std::move(conferred));
    } else {
      result.audit.push_back("item '" + item.id + "' = " +
                             describe(item.probability));
      operands.push_back(item.probability);
    }
  }
  if (operands.empty()) {
    throw Error(errc::invalid_argument,
                "document has no prior and no items to combine");
  }
  result.value = cmpe_add(operands);
  result.audit.push_back("cmpe_add over " +
                         std::to_string(operands.size()) +
                         " operands = " + describe(result.value));
  return result;
}

EvidenceDocument parse_evidence_document(const std::string& json_text,
                                         Mode mode) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(errc::parse_error, std::string("JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("document root must be an object");
  require_known_keys(root, {"hypothesis", "prior", "evidence"}, "document");
  if (!root.contains("hypothesis") || !root["hypothesis"].is_string() ||
      root["hypothesis"].get<std::string>().empty()) {
    invalid("document needs a non-empty string 'hypothesis'");
  }
  if (!root.contains("evidence") || !root["evidence"].is_array()) {
    invalid("document needs an 'evidence' array");
  }

  EvidenceDocument doc;
  doc.hypothesis_id = root["hypothesis"].get<std::string>();
  if (root.contains("prior")) {
    doc.prior = number_to_probability(root["prior"], mode, "prior");
  }

  std::unordered_set<std::string> seen_ids;
  for (const auto& item_json : root["evidence"]) {
    if (!item_json.is_object()) invalid("evidence entries must be objects");
    require_known_keys(item_json, {"id", "p", "kind", "tags", "carrier"},
                       "evidence item");
    if (!item_json.contains("id") || !item_json["id"].is_string() ||
        item_json["id"].get<std::string>().empty()) {
      invalid("evidence item needs a non-empty string 'id'");
    }
    Evidence item;
    item.id = item_json["id"].get<std::string>();
    if (!seen_ids.insert(item.id).second) {
      invalid("duplicate evidence id '" + item.id + "'");
    }
    if (!item_json.contains("p")) {
      invalid("evidence item '" + item.id + "' needs 'p'");
    }
    item.probability =
        number_to_probability(item_json["p"], mode, "item '" + item.id + "' p");
    if (!item_json.contains("kind") || !item_json["kind"].is_string()) {
      invalid("evidence item '" + item.id + "' needs a string 'kind'");
    }
    const std::string kind = item_json["kind"].get<std::string>();
    if (kind == "weight") {
      item.kind = EvidenceKind::WeightBearing;
    } else if (kind == "extensional") {
      item.kind = EvidenceKind::Extensional;
    } else {
      invalid("evidence item '" + item.id + "': kind must be 'weight' or " +
              "'extensional', got '" + kind + "'");
    }
    if (!item_json.contains("tags") || !item_json["tags"].is_array()) {
      invalid("evidence item '" + item.id + "' needs a 'tags' array");
    }
    for (const auto& tag : item_json["tags"]) {
      if (!tag.is_string() || tag.get<std::string>().empty()) {
        invalid("evidence item '" + item.id +
                "': tags must be non-empty strings");
      }
      item.tags.insert(SemanticTag{tag.get<std::string>()});
    }
    if (item.kind == EvidenceKind::WeightBearing && item.tags.empty()) {
      invalid("weight-bearing item '" + item.id +
              "' must declare at least one tag");
    }
    if (item_json.contains("carrier")) {
      const auto& carrier = item_json["carrier"];
      if (!carrier.is_object()) {
        invalid("item '" + item.id + "': carrier must be an object");
      }
      require_known_keys(carrier, {"prior", "transfer"},
                         "carrier of evidence item");
      if (!carrier.contains("prior") || !carrier.contains("transfer")) {
        invalid("item '" + item.id +
                "': carrier needs 'prior' and 'transfer'");
      }
      item.conditional_on_carrier = SupportContribution{
          number_to_probability(carrier["prior"], mode,
                                "item '" + item.id + "' carrier prior"),
          number_to_probability(carrier["transfer"], mode,
                                "item '" + item.id + "' carrier transfer")};
    }
    doc.items.push_back(std::move(item));
  }
  return doc;
}

std::vector<LaplaceComparisonRow> laplace_vs_cmpe(
    std::span<const std::uint64_t> group_sizes, unsigned groups) {
  if (group_sizes.empty()) {
    throw Error(errc::invalid_argument, "no group sizes given");
  }
  if (groups == 0) {
    throw Error(errc::invalid_argument, "need at least one group");
  }
  std::vector<LaplaceComparisonRow> rows;
  rows.reserve(group_sizes.size());
  for (const std::uint64_t n : group_sizes) {
    const Probability single = laplace_succession(n, n);
    const Probability pooled =
        laplace_succession(n * groups, n * groups);
    const std::vector<Probability> per_group(groups, single);
    const Probability combined = cmpe_add(per_group);
    const Probability margin = dpe_sub(combined, {pooled});
    rows.push_back({n, single.exact_value(), pooled.exact_value(),
                    combined.exact_value(), margin.exact_value()});
  }
  return rows;
}

}  // namespace probcomb::evidence
