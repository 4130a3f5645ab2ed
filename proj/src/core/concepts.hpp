#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/rational.hpp"

namespace scompress {

using PointId = int;

// Finite ordered domain. Point identity is the index; names are cosmetic.
class FiniteDomain {
 public:
  explicit FiniteDomain(std::vector<std::string> names);
  static FiniteDomain indexed(int n, const std::string& prefix = "x");

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(PointId p) const { return names_.at(p); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<PointId> find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

enum class LabelKind { Binary, Multiclass, RealGrid };

// Binary is multiclass(2) for loss purposes but stays a distinct kind for
// scheme capability checks. RealGrid labels are exact rationals i/q.
class LabelSpace {
 public:
  static LabelSpace binary();
  static LabelSpace multiclass(int m);
  static LabelSpace real_grid(int q);

  LabelKind kind() const { return kind_; }
  bool is_binary() const { return kind_ == LabelKind::Binary; }
  bool is_real() const { return kind_ == LabelKind::RealGrid; }

  // Number of values in the label universe (2, m, or q+1).
  int universe_size() const;
  // Value of the i-th label in canonical order (0..universe_size-1).
  Rat value(int index) const;
  std::optional<int> index_of(const Rat& label) const;

  // Class tables must use exact universe members.
  bool valid_table_label(const Rat& label) const;
  // Samples over realGrid may carry any rational in [0,1]; classification
  // samples must use universe members.
  bool valid_sample_label(const Rat& label) const;

  int multiclass_m() const { return m_; }
  int grid_q() const { return q_; }

  bool operator==(const LabelSpace& o) const {
    return kind_ == o.kind_ && m_ == o.m_ && q_ == o.q_;
  }

 private:
  LabelKind kind_ = LabelKind::Binary;
  int m_ = 2;  // multiclass size
  int q_ = 1;  // realGrid denominator
};

struct SamplePair {
  PointId point = 0;
  Rat label;
};

// Ordered sequence of (point, label) pairs; duplicates allowed.
struct LabeledSample {
  std::vector<SamplePair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  void add(PointId p, Rat label) { pairs.push_back({p, std::move(label)}); }
};

// Explicit table of concepts over a finite domain. Rows are pairwise
// distinct; row order is the canonical order used for every tie-break.
class FiniteConceptClass {
 public:
  FiniteConceptClass(std::shared_ptr<const FiniteDomain> domain, LabelSpace labels,
                     std::vector<std::vector<Rat>> table,
                     std::vector<std::string> concept_names = {});

  const FiniteDomain& domain() const { return *domain_; }
  std::shared_ptr<const FiniteDomain> domain_ptr() const { return domain_; }
  const LabelSpace& labels() const { return labels_; }
  int num_concepts() const { return static_cast<int>(table_.size()); }
  const std::vector<Rat>& row(int c) const { return table_.at(c); }
  const Rat& at(int c, PointId p) const { return table_.at(c).at(p); }
  const std::string& concept_name(int c) const { return names_.at(c); }
  const std::vector<std::string>& concept_names() const { return names_; }

  // Per-entry index into values(): all combinatorial search runs on these
  // small integers instead of rationals.
  int value_index(int c, PointId p) const { return vtable_[c][p]; }
  const std::vector<Rat>& values() const { return values_; }
  std::optional<int> find_value(const Rat& v) const;

  // Distinct labels attained at a point, as indices into values().
  std::vector<int> attained_value_indices(PointId p) const;

  void check_sample(const LabeledSample& s) const;

 private:
  std::shared_ptr<const FiniteDomain> domain_;
  LabelSpace labels_;
  std::vector<std::vector<Rat>> table_;
  std::vector<std::string> names_;
  std::vector<Rat> values_;               // sorted distinct labels in the table
  std::vector<std::vector<int>> vtable_;  // table_ mapped to value indices
};

// Total deterministic map from domain points to labels. Carries optional
// structure used by the flag verifiers: a table row id when the predictor is
// a class member, a concept id list when it is a pointwise majority.
struct Predictor {
  std::function<Rat(PointId)> eval;
  std::optional<int> proper_row;
  std::shared_ptr<const std::vector<int>> majority_rows;

  Rat operator()(PointId p) const { return eval(p); }
};

Predictor row_predictor(const FiniteConceptClass& c, int row);

enum class LossKind { ZeroOne, Lp, LInf };

struct LossSpec {
  LossKind kind = LossKind::ZeroOne;
  Rat p = 1;  // only for Lp

  static LossSpec zero_one() { return {LossKind::ZeroOne, 1}; }
  static LossSpec lp(Rat p) { return {LossKind::Lp, std::move(p)}; }
  static LossSpec linf() { return {LossKind::LInf, 1}; }
};

// Exact empirical loss. Lp requires integer p; use empirical_loss_bounds for
// non-integer p.
Rat empirical_loss(const Predictor& p, const LabeledSample& s, const LossSpec& loss,
                   const LabelSpace& space);

// Certified [lower, upper] with upper - lower <= 2^-40, for rational p >= 1.
std::pair<Rat, Rat> empirical_loss_bounds(const Predictor& pred, const LabeledSample& s,
                                          const Rat& p, const LabelSpace& space);

// Canonically-first concept with zero loss on S, if any. Empty S is vacuously
// realizable by the first concept.
std::optional<int> is_realizable(const FiniteConceptClass& c, const LabeledSample& s);

// Canonically-first empirical-loss minimizer, with its exact loss.
std::pair<int, Rat> erm(const FiniteConceptClass& c, const LabeledSample& s,
                        const LossSpec& loss);

}  // namespace scompress
