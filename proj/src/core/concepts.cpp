#include "core/concepts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "core/error.hpp"

namespace scompress {

FiniteDomain::FiniteDomain(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) fail(ErrorCode::ConstructionError, "domain must be non-empty");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second)
      fail(ErrorCode::ConstructionError, "duplicate point name '" + n + "'");
  }
}

FiniteDomain FiniteDomain::indexed(int n, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return FiniteDomain(std::move(names));
}

std::optional<PointId> FiniteDomain::find(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

LabelSpace LabelSpace::binary() {
  LabelSpace s;
  s.kind_ = LabelKind::Binary;
  s.m_ = 2;
  return s;
}

LabelSpace LabelSpace::multiclass(int m) {
  if (m < 2) fail(ErrorCode::ConstructionError, "multiclass needs m >= 2");
  LabelSpace s;
  s.kind_ = LabelKind::Multiclass;
  s.m_ = m;
  return s;
}

LabelSpace LabelSpace::real_grid(int q) {
  if (q < 1) fail(ErrorCode::ConstructionError, "realGrid needs q >= 1");
  LabelSpace s;
  s.kind_ = LabelKind::RealGrid;
  s.q_ = q;
  return s;
}

int LabelSpace::universe_size() const {
  switch (kind_) {
    case LabelKind::Binary: return 2;
    case LabelKind::Multiclass: return m_;
    case LabelKind::RealGrid: return q_ + 1;
  }
  return 0;
}

Rat LabelSpace::value(int index) const {
  if (index < 0 || index >= universe_size())
    fail(ErrorCode::InvalidArgument, "label index out of range");
  if (kind_ == LabelKind::RealGrid) return Rat(index, q_);
  return Rat(index);
}

std::optional<int> LabelSpace::index_of(const Rat& label) const {
  if (kind_ == LabelKind::RealGrid) {
    Rat scaled = label * q_;
    if (!rat_is_int(scaled)) return std::nullopt;
    BigInt i = boost::multiprecision::numerator(scaled);
    if (i < 0 || i > q_) return std::nullopt;
    return static_cast<int>(i);
  }
  if (!rat_is_int(label)) return std::nullopt;
  BigInt i = boost::multiprecision::numerator(label);
  if (i < 0 || i >= universe_size()) return std::nullopt;
  return static_cast<int>(i);
}

bool LabelSpace::valid_table_label(const Rat& label) const {
  return index_of(label).has_value();
}

bool LabelSpace::valid_sample_label(const Rat& label) const {
  if (kind_ == LabelKind::RealGrid) return label >= 0 && label <= 1;
  return valid_table_label(label);
}

FiniteConceptClass::FiniteConceptClass(std::shared_ptr<const FiniteDomain> domain,
                                       LabelSpace labels,
                                       std::vector<std::vector<Rat>> table,
                                       std::vector<std::string> concept_names)
    : domain_(std::move(domain)), labels_(labels), table_(std::move(table)),
      names_(std::move(concept_names)) {
  if (!domain_) fail(ErrorCode::ConstructionError, "null domain");
  const int n = domain_->size();
  if (names_.empty()) {
    names_.reserve(table_.size());
    for (std::size_t c = 0; c < table_.size(); ++c) names_.push_back("c" + std::to_string(c));
  }
  if (names_.size() != table_.size())
    fail(ErrorCode::ConstructionError, "concept name count mismatch");

  std::set<std::vector<Rat>> seen_rows;
  std::unordered_set<std::string> seen_names;
  std::set<Rat> values;
  for (std::size_t c = 0; c < table_.size(); ++c) {
    if (static_cast<int>(table_[c].size()) != n)
      fail(ErrorCode::ConstructionError, "row width mismatch for concept '" + names_[c] + "'");
    for (const Rat& v : table_[c]) {
      if (!labels_.valid_table_label(v))
        fail(ErrorCode::TypeMismatch,
             "table entry " + rat_to_string(v) + " outside the label space");
      values.insert(v);
    }
    if (!seen_rows.insert(table_[c]).second)
      fail(ErrorCode::ConstructionError, "duplicate concept row '" + names_[c] + "'");
    if (!seen_names.insert(names_[c]).second)
      fail(ErrorCode::ConstructionError, "duplicate concept name '" + names_[c] + "'");
  }

  values_.assign(values.begin(), values.end());
  std::map<Rat, int> vidx;
  for (std::size_t i = 0; i < values_.size(); ++i) vidx[values_[i]] = static_cast<int>(i);
  vtable_.resize(table_.size());
  for (std::size_t c = 0; c < table_.size(); ++c) {
    vtable_[c].resize(n);
    for (int p = 0; p < n; ++p) vtable_[c][p] = vidx[table_[c][p]];
  }
}

std::optional<int> FiniteConceptClass::find_value(const Rat& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it != values_.end() && *it == v) return static_cast<int>(it - values_.begin());
  return std::nullopt;
}

std::vector<int> FiniteConceptClass::attained_value_indices(PointId p) const {
  std::set<int> s;
  for (int c = 0; c < num_concepts(); ++c) s.insert(vtable_[c][p]);
  return std::vector<int>(s.begin(), s.end());
}

void FiniteConceptClass::check_sample(const LabeledSample& s) const {
  for (const auto& [pt, label] : s.pairs) {
    if (pt < 0 || pt >= domain_->size())
      fail(ErrorCode::TypeMismatch, "sample point out of domain");
    if (!labels_.valid_sample_label(label))
      fail(ErrorCode::TypeMismatch,
           "sample label " + rat_to_string(label) + " outside the label space");
  }
}

Predictor row_predictor(const FiniteConceptClass& c, int row) {
  if (row < 0 || row >= c.num_concepts())
    fail(ErrorCode::InvalidArgument, "row id out of range");
  Predictor p;
  auto values = std::make_shared<std::vector<Rat>>(c.row(row));
  p.eval = [values](PointId x) { return values->at(x); };
  p.proper_row = row;
  return p;
}

namespace {

void check_loss_types(const LossSpec& loss, const LabelSpace& space) {
  if (loss.kind != LossKind::ZeroOne && !space.is_real())
    fail(ErrorCode::TypeMismatch, "lp/lInf losses require realGrid labels");
}

}  // namespace

Rat empirical_loss(const Predictor& p, const LabeledSample& s, const LossSpec& loss,
                   const LabelSpace& space) {
  if (s.empty()) fail(ErrorCode::EmptySample, "empirical loss of empty sample");
  check_loss_types(loss, space);
  const auto n = static_cast<std::int64_t>(s.size());
  switch (loss.kind) {
    case LossKind::ZeroOne: {
      std::int64_t mismatches = 0;
      for (const auto& [pt, label] : s.pairs)
        if (p(pt) != label) ++mismatches;
      return Rat(mismatches, n);
    }
    case LossKind::Lp: {
      if (!rat_is_int(loss.p) || loss.p < 1)
        fail(ErrorCode::InvalidArgument,
             "exact lp loss needs integer p >= 1; use empirical_loss_bounds");
      auto pe = static_cast<unsigned>(boost::multiprecision::numerator(loss.p));
      Rat sum = 0;
      for (const auto& [pt, label] : s.pairs) sum += rat_pow(rat_abs(p(pt) - label), pe);
      return sum / n;
    }
    case LossKind::LInf: {
      Rat worst = 0;
      for (const auto& [pt, label] : s.pairs) worst = std::max(worst, rat_abs(p(pt) - label));
      return worst;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown loss kind");
}

std::pair<Rat, Rat> empirical_loss_bounds(const Predictor& pred, const LabeledSample& s,
                                          const Rat& p, const LabelSpace& space) {
  if (s.empty()) fail(ErrorCode::EmptySample, "empirical loss of empty sample");
  check_loss_types(LossSpec::lp(p), space);
  if (p < 1) fail(ErrorCode::InvalidArgument, "lp loss needs p >= 1");
  if (rat_is_int(p)) {
    Rat exact = empirical_loss(pred, s, LossSpec::lp(p), space);
    return {exact, exact};
  }
  // |d|^(u/v) = (|d|^u)^(1/v), bounded to 2^-40 per term and divided by n, so
  // the total gap stays within 2^-40.
  auto u = static_cast<unsigned>(boost::multiprecision::numerator(p));
  auto v = static_cast<unsigned>(boost::multiprecision::denominator(p));
  const auto n = static_cast<std::int64_t>(s.size());
  Rat lo = 0, hi = 0;
  const Rat step(1, BigInt(1) << 40);
  for (const auto& [pt, label] : s.pairs) {
    Rat d = rat_abs(pred(pt) - label);
    Rat term_lo = rat_root_lower(rat_pow(d, u), v);
    lo += term_lo;
    hi += term_lo + step;
  }
  return {lo / n, hi / n};
}

std::optional<int> is_realizable(const FiniteConceptClass& c, const LabeledSample& s) {
  c.check_sample(s);
  for (int i = 0; i < c.num_concepts(); ++i) {
    bool ok = true;
    for (const auto& [pt, label] : s.pairs) {
      if (c.at(i, pt) != label) {
        ok = false;
        break;
      }
    }
    if (ok) return i;
  }
  return std::nullopt;
}

std::pair<int, Rat> erm(const FiniteConceptClass& c, const LabeledSample& s,
                        const LossSpec& loss) {
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "erm over empty class");
  if (s.empty()) fail(ErrorCode::EmptySample, "erm over empty sample");
  c.check_sample(s);
  int best = -1;
  Rat best_loss;
  for (int i = 0; i < c.num_concepts(); ++i) {
    Rat l = empirical_loss(row_predictor(c, i), s, loss, c.labels());
    if (best < 0 || l < best_loss) {
      best = i;
      best_loss = l;
    }
  }
  return {best, best_loss};
}

}  // namespace scompress
