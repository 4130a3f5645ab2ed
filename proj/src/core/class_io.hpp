#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/concepts.hpp"

namespace scompress {

// Partial binary concepts c: X -> {0,1,*}. Entries are kStar off support.
class PartialConceptClass {
 public:
  static constexpr int kStar = -1;

  PartialConceptClass(std::shared_ptr<const FiniteDomain> domain,
                      std::vector<std::vector<int>> table,
                      std::vector<std::string> concept_names = {});

  const FiniteDomain& domain() const { return *domain_; }
  std::shared_ptr<const FiniteDomain> domain_ptr() const { return domain_; }
  int num_concepts() const { return static_cast<int>(table_.size()); }
  int at(int c, PointId p) const { return table_.at(c).at(p); }
  bool in_support(int c, PointId p) const { return at(c, p) != kStar; }
  const std::string& concept_name(int c) const { return names_.at(c); }

 private:
  std::shared_ptr<const FiniteDomain> domain_;
  std::vector<std::vector<int>> table_;
  std::vector<std::string> names_;
};

// JSON concept-class format shared by every module and the CLI:
//   {"domain": ["a","b"], "labels": {"kind": "binary"}, "concepts": {"c0": [0,1]}}
// multiclass adds "m", realGrid adds "q"; realGrid entries are strings "i/q".
// Partial binary classes use kind "binary" with "*" entries.
struct ParsedClass {
  std::optional<FiniteConceptClass> total;
  std::optional<PartialConceptClass> partial;
};

ParsedClass parse_class_json(const nlohmann::ordered_json& j);
ParsedClass parse_class_text(const std::string& text);
nlohmann::ordered_json class_to_json(const FiniteConceptClass& c);
nlohmann::ordered_json partial_class_to_json(const PartialConceptClass& c);

// Sample file format: JSON list of [point, label]; point is a name or index.
LabeledSample parse_sample_json(const nlohmann::ordered_json& j, const FiniteDomain& domain,
                                const LabelSpace& labels);
nlohmann::ordered_json sample_to_json(const LabeledSample& s, const FiniteDomain& domain,
                                      const LabelSpace& labels);

Rat parse_label(const nlohmann::ordered_json& j, const LabelSpace& labels);
nlohmann::ordered_json label_to_json(const Rat& label, const LabelSpace& labels);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace scompress
