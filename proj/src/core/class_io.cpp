#include "core/class_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"

namespace scompress {

using nlohmann::ordered_json;

PartialConceptClass::PartialConceptClass(std::shared_ptr<const FiniteDomain> domain,
                                         std::vector<std::vector<int>> table,
                                         std::vector<std::string> concept_names)
    : domain_(std::move(domain)), table_(std::move(table)), names_(std::move(concept_names)) {
  if (!domain_) fail(ErrorCode::ConstructionError, "null domain");
  if (names_.empty())
    for (std::size_t c = 0; c < table_.size(); ++c) names_.push_back("c" + std::to_string(c));
  if (names_.size() != table_.size())
    fail(ErrorCode::ConstructionError, "concept name count mismatch");
  for (std::size_t c = 0; c < table_.size(); ++c) {
    if (static_cast<int>(table_[c].size()) != domain_->size())
      fail(ErrorCode::ConstructionError, "row width mismatch");
    bool any_support = false;
    for (int v : table_[c]) {
      if (v != 0 && v != 1 && v != kStar)
        fail(ErrorCode::ConstructionError, "partial entries must be 0, 1, or *");
      any_support |= (v != kStar);
    }
    if (!any_support)
      fail(ErrorCode::ConstructionError, "partial concept with empty support");
  }
}

Rat parse_label(const ordered_json& j, const LabelSpace& labels) {
  Rat v;
  if (j.is_number_integer()) {
    v = Rat(static_cast<std::int64_t>(j.get<std::int64_t>()));
  } else if (j.is_string()) {
    v = rat_from_string(j.get<std::string>());
  } else {
    fail(ErrorCode::IoError, "label must be an integer or a rational string");
  }
  if (!labels.valid_sample_label(v))
    fail(ErrorCode::TypeMismatch, "label " + rat_to_string(v) + " outside the label space");
  return v;
}

ordered_json label_to_json(const Rat& label, const LabelSpace& labels) {
  if (labels.is_real()) return rat_to_string(label);
  return static_cast<std::int64_t>(boost::multiprecision::numerator(label));
}

namespace {

LabelSpace parse_label_space(const ordered_json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "binary") return LabelSpace::binary();
  if (kind == "multiclass") return LabelSpace::multiclass(j.at("m").get<int>());
  if (kind == "realGrid") return LabelSpace::real_grid(j.at("q").get<int>());
  fail(ErrorCode::IoError, "unknown label kind '" + kind + "'");
}

ordered_json label_space_to_json(const LabelSpace& s) {
  ordered_json j;
  switch (s.kind()) {
    case LabelKind::Binary: j["kind"] = "binary"; break;
    case LabelKind::Multiclass:
      j["kind"] = "multiclass";
      j["m"] = s.multiclass_m();
      break;
    case LabelKind::RealGrid:
      j["kind"] = "realGrid";
      j["q"] = s.grid_q();
      break;
  }
  return j;
}

bool is_star(const ordered_json& j) { return j.is_string() && j.get<std::string>() == "*"; }

}  // namespace

ParsedClass parse_class_json(const ordered_json& j) {
  std::vector<std::string> names = j.at("domain").get<std::vector<std::string>>();
  auto domain = std::make_shared<const FiniteDomain>(std::move(names));
  LabelSpace labels = parse_label_space(j.at("labels"));

  const auto& concepts = j.at("concepts");
  if (!concepts.is_object()) fail(ErrorCode::IoError, "'concepts' must be an object");

  bool partial = false;
  for (const auto& [name, row] : concepts.items()) {
    (void)name;
    for (const auto& entry : row)
      if (is_star(entry)) partial = true;
  }

  ParsedClass out;
  if (partial) {
    if (!labels.is_binary())
      fail(ErrorCode::IoError, "partial classes must use binary labels");
    std::vector<std::vector<int>> table;
    std::vector<std::string> cnames;
    for (const auto& [name, row] : concepts.items()) {
      std::vector<int> r;
      for (const auto& entry : row) {
        if (is_star(entry)) {
          r.push_back(PartialConceptClass::kStar);
        } else {
          Rat v = parse_label(entry, labels);
          r.push_back(v == 0 ? 0 : 1);
        }
      }
      table.push_back(std::move(r));
      cnames.push_back(name);
    }
    out.partial.emplace(domain, std::move(table), std::move(cnames));
    return out;
  }

  std::vector<std::vector<Rat>> table;
  std::vector<std::string> cnames;
  for (const auto& [name, row] : concepts.items()) {
    std::vector<Rat> r;
    for (const auto& entry : row) {
      Rat v = parse_label(entry, labels);
      if (!labels.valid_table_label(v))
        fail(ErrorCode::TypeMismatch,
             "table entry " + rat_to_string(v) + " is not on the label grid");
      r.push_back(std::move(v));
    }
    table.push_back(std::move(r));
    cnames.push_back(name);
  }
  out.total.emplace(domain, labels, std::move(table), std::move(cnames));
  return out;
}

ParsedClass parse_class_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed class JSON: ") + e.what());
  }
  return parse_class_json(j);
}

ordered_json class_to_json(const FiniteConceptClass& c) {
  ordered_json j;
  j["domain"] = c.domain().names();
  j["labels"] = label_space_to_json(c.labels());
  ordered_json concepts = ordered_json::object();
  for (int i = 0; i < c.num_concepts(); ++i) {
    ordered_json row = ordered_json::array();
    for (PointId p = 0; p < c.domain().size(); ++p)
      row.push_back(label_to_json(c.at(i, p), c.labels()));
    concepts[c.concept_name(i)] = std::move(row);
  }
  j["concepts"] = std::move(concepts);
  return j;
}

ordered_json partial_class_to_json(const PartialConceptClass& c) {
  ordered_json j;
  j["domain"] = c.domain().names();
  j["labels"] = label_space_to_json(LabelSpace::binary());
  ordered_json concepts = ordered_json::object();
  for (int i = 0; i < c.num_concepts(); ++i) {
    ordered_json row = ordered_json::array();
    for (PointId p = 0; p < c.domain().size(); ++p) {
      int v = c.at(i, p);
      if (v == PartialConceptClass::kStar)
        row.push_back("*");
      else
        row.push_back(v);
    }
    concepts[c.concept_name(i)] = std::move(row);
  }
  j["concepts"] = std::move(concepts);
  return j;
}

LabeledSample parse_sample_json(const ordered_json& j, const FiniteDomain& domain,
                                const LabelSpace& labels) {
  if (!j.is_array()) fail(ErrorCode::IoError, "sample must be a JSON list of [point, label]");
  LabeledSample s;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      fail(ErrorCode::IoError, "sample entries must be [point, label] pairs");
    PointId p;
    if (entry[0].is_number_integer()) {
      p = entry[0].get<int>();
      if (p < 0 || p >= domain.size()) fail(ErrorCode::IoError, "sample point index out of range");
    } else if (entry[0].is_string()) {
      auto found = domain.find(entry[0].get<std::string>());
      if (!found)
        fail(ErrorCode::IoError, "unknown point '" + entry[0].get<std::string>() + "'");
      p = *found;
    } else {
      fail(ErrorCode::IoError, "sample point must be a name or index");
    }
    s.add(p, parse_label(entry[1], labels));
  }
  return s;
}

ordered_json sample_to_json(const LabeledSample& s, const FiniteDomain& domain,
                            const LabelSpace& labels) {
  ordered_json j = ordered_json::array();
  for (const auto& [pt, label] : s.pairs)
    j.push_back(ordered_json::array({domain.name(pt), label_to_json(label, labels)}));
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
}

}  // namespace scompress
