#include "core/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "core/dimensions.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace scompress {

bool sample_pair_less(const SamplePair& a, const SamplePair& b) {
  if (a.point != b.point) return a.point < b.point;
  return a.label < b.label;
}

bool sample_pair_eq(const SamplePair& a, const SamplePair& b) {
  return a.point == b.point && a.label == b.label;
}

namespace {

int first_consistent_row(const FiniteConceptClass& c, const KeptPairs& pairs) {
  for (int i = 0; i < c.num_concepts(); ++i) {
    bool ok = true;
    for (const auto& [pt, label] : pairs) {
      if (c.at(i, pt) != label) {
        ok = false;
        break;
      }
    }
    if (ok) return i;
  }
  return -1;
}

Predictor first_consistent_predictor(const FiniteConceptClass& c, const KeptPairs& pairs) {
  int row = first_consistent_row(c, pairs);
  if (row < 0) fail(ErrorCode::Unrealizable, "no concept consistent with the kept set");
  return row_predictor(c, row);
}

bool row_consistent_with_sample(const FiniteConceptClass& c, int row, const LabeledSample& s) {
  for (const auto& [pt, label] : s.pairs)
    if (c.at(row, pt) != label) return false;
  return true;
}

template <typename F>
bool first_combination(int n, int k, F&& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) return f(idx);
  if (k > n) return false;
  while (true) {
    if (f(idx)) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<SamplePair> sorted_pairs(const std::vector<SamplePair>& pairs) {
  auto out = pairs;
  std::sort(out.begin(), out.end(), sample_pair_less);
  return out;
}

}  // namespace

bool pair_multisets_equal(const std::vector<SamplePair>& a, const std::vector<SamplePair>& b) {
  if (a.size() != b.size()) return false;
  auto sa = sorted_pairs(a), sb = sorted_pairs(b);
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (!sample_pair_eq(sa[i], sb[i])) return false;
  return true;
}

CompressionScheme proper_exhaustive_scheme(std::shared_ptr<const FiniteConceptClass> c,
                                           int budget) {
  if (budget < 1) fail(ErrorCode::ConstructionError, "budget must be >= 1");
  CompressionScheme scheme;
  scheme.name = "proper-exhaustive";
  scheme.flags = kProper;
  scheme.size_budget_note = "<= budget kept points, zero bits";
  scheme.declared_size_cap = static_cast<std::size_t>(budget);

  scheme.compress = [c, budget](const LabeledSample& s) -> CompressionOutput {
    c->check_sample(s);
    if (!is_realizable(*c, s))
      fail(ErrorCode::Unrealizable, "proper-exhaustive needs a realizable sample");
    const int n = static_cast<int>(s.size());
    for (int k = 0; k <= std::min(budget, n); ++k) {
      CompressionOutput out;
      bool hit = first_combination(n, k, [&](const std::vector<int>& idx) {
        KeptPairs pairs;
        pairs.reserve(k);
        for (int i : idx) pairs.push_back(s.pairs[i]);
        int row = first_consistent_row(*c, pairs);
        if (row < 0 || !row_consistent_with_sample(*c, row, s)) return false;
        out.kept_positions.assign(idx.begin(), idx.end());
        out.kept_pairs = std::move(pairs);
        return true;
      });
      if (hit) return out;
    }
    fail(ErrorCode::BudgetExceeded, "no consistent subsequence within budget");
  };

  scheme.reconstruct = [c](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "proper-exhaustive carries no bits");
    return first_consistent_predictor(*c, pairs);
  };
  return scheme;
}

namespace {

struct BoostPlan {
  // Per round: positions into the kept list.
  std::vector<std::vector<int>> round_members;
};

Predictor boost_majority_predictor(const FiniteConceptClass& c, const KeptPairs& kept,
                                   const BoostPlan& plan) {
  auto rows = std::make_shared<std::vector<int>>();
  for (const auto& members : plan.round_members) {
    KeptPairs sub;
    for (int m : members) sub.push_back(kept.at(m));
    int row = first_consistent_row(c, sub);
    if (row < 0) fail(ErrorCode::DecodeError, "boost round subsample is contradictory");
    rows->push_back(row);
  }
  Predictor p;
  p.majority_rows = rows;
  const FiniteConceptClass* cls = &c;
  p.eval = [cls, rows](PointId x) -> Rat {
    std::size_t ones = 0;
    for (int r : *rows)
      if (cls->at(r, x) == 1) ++ones;
    return Rat(2 * ones > rows->size() ? 1 : 0);  // ties break to zero
  };
  return p;
}

}  // namespace

CompressionScheme majority_boost_scheme(std::shared_ptr<const FiniteConceptClass> c) {
  if (!c->labels().is_binary())
    fail(ErrorCode::ConstructionError, "boosting substrate needs a binary class");
  const int d = vc_dimension(*c).value;

  CompressionScheme scheme;
  scheme.name = "majority-boost";
  scheme.flags = kMajorityVote;
  scheme.size_budget_note = "union of per-round support subsamples plus round-boundary bits";

  scheme.compress = [c, d](const LabeledSample& s) -> CompressionOutput {
    c->check_sample(s);
    CompressionOutput out;
    const int n = static_cast<int>(s.size());
    if (n == 0) {
      BitWriter w;
      w.write_gamma(1);  // zero rounds
      out.bits = w.bits();
      return out;
    }
    if (!is_realizable(*c, s))
      fail(ErrorCode::Unrealizable, "boosting needs a realizable sample");

    const int rounds = std::max(1, static_cast<int>(std::ceil(32.0 * std::log(double(n)))));
    // Claimed weak-learner edge is gamma = 1/16; rounds are extended until the
    // round concept is correct on >= 7/8 of the weight, which is what makes
    // ceil(32 ln n) rounds enough for a consistent majority.
    const Rat claim_num(9), claim_den(16);
    const Rat target_num(7), target_den(8);

    std::vector<Rat> w(n, Rat(1));
    std::vector<std::vector<int>> round_positions;
    for (int t = 0; t < rounds; ++t) {
      std::vector<int> order(n);
      for (int i = 0; i < n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return w[a] > w[b]; });
      std::set<int> sub(order.begin(), order.begin() + std::min(n, d + 1));

      int row = -1;
      while (true) {
        KeptPairs pairs;
        for (int i : sub) pairs.push_back(s.pairs[i]);
        row = first_consistent_row(*c, pairs);
        if (row < 0) fail(ErrorCode::SchemeFailure, "weak learner lost realizability");
        Rat total = 0, correct = 0;
        for (int i = 0; i < n; ++i) {
          total += w[i];
          if (c->at(row, s.pairs[i].point) == s.pairs[i].label) correct += w[i];
        }
        if (correct * target_den >= total * target_num) {
          if (correct * claim_den < total * claim_num)
            fail(ErrorCode::SchemeFailure, "weak learner below the claimed 1/2+1/16 edge");
          break;
        }
        // Grow the support set with the heaviest misclassified point.
        int add = -1;
        for (int i : order) {
          if (sub.count(i)) continue;
          if (c->at(row, s.pairs[i].point) != s.pairs[i].label) {
            add = i;
            break;
          }
        }
        if (add < 0) fail(ErrorCode::SchemeFailure, "no misclassified point to add");
        sub.insert(add);
      }

      round_positions.emplace_back(sub.begin(), sub.end());
      for (int i = 0; i < n; ++i)
        if (c->at(row, s.pairs[i].point) == s.pairs[i].label) w[i] /= 2;
    }

    std::set<int> kept_set;
    for (const auto& r : round_positions) kept_set.insert(r.begin(), r.end());
    std::vector<int> kept(kept_set.begin(), kept_set.end());
    std::vector<int> where(n, -1);
    for (std::size_t i = 0; i < kept.size(); ++i) where[kept[i]] = static_cast<int>(i);

    BitWriter wtr;
    wtr.write_gamma(static_cast<std::uint64_t>(rounds) + 1);
    const int width = ceil_log2(kept.size());
    for (const auto& r : round_positions) {
      wtr.write_gamma(r.size());
      for (int i : r) wtr.write_uint(static_cast<std::uint64_t>(where[i]), width);
    }
    for (int i : kept) {
      out.kept_positions.push_back(static_cast<std::size_t>(i));
      out.kept_pairs.push_back(s.pairs[i]);
    }
    out.bits = wtr.bits();
    return out;
  };

  scheme.reconstruct = [c](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    BitReader r(bits);
    const auto rounds = r.read_gamma() - 1;
    BoostPlan plan;
    const int width = ceil_log2(pairs.size());
    for (std::uint64_t t = 0; t < rounds; ++t) {
      auto count = r.read_gamma();
      std::vector<int> members;
      for (std::uint64_t i = 0; i < count; ++i) {
        auto idx = r.read_uint(width);
        if (idx >= pairs.size()) fail(ErrorCode::DecodeError, "boost member index out of range");
        members.push_back(static_cast<int>(idx));
      }
      plan.round_members.push_back(std::move(members));
    }
    if (!r.done()) fail(ErrorCode::DecodeError, "trailing bits in boost output");
    return boost_majority_predictor(*c, pairs, plan);
  };
  return scheme;
}

namespace {

enum class ThresholdOrientation { Decreasing, Increasing };

// A threshold family over the linearly ordered domain: every row monotone,
// all in the same direction. Subfamilies (including all-constant rows) pass.
ThresholdOrientation detect_threshold_family(const FiniteConceptClass& c) {
  bool any_dec = false, any_inc = false;
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    bool non_inc = true, non_dec = true;
    for (PointId p = 1; p < c.domain().size(); ++p) {
      if (c.at(ci, p) > c.at(ci, p - 1)) non_inc = false;
      if (c.at(ci, p) < c.at(ci, p - 1)) non_dec = false;
    }
    if (!non_inc && !non_dec)
      fail(ErrorCode::ConstructionError, "row is not a one-dimensional threshold");
    if (!non_inc) any_inc = true;
    if (!non_dec) any_dec = true;
  }
  if (any_inc && any_dec)
    fail(ErrorCode::ConstructionError, "mixed threshold orientations");
  return any_inc ? ThresholdOrientation::Increasing : ThresholdOrientation::Decreasing;
}

}  // namespace

CompressionScheme threshold_stable_scheme(std::shared_ptr<const FiniteConceptClass> c) {
  if (!c->labels().is_binary())
    fail(ErrorCode::ConstructionError, "threshold scheme needs a binary class");
  const ThresholdOrientation orient = detect_threshold_family(*c);

  CompressionScheme scheme;
  scheme.name = "threshold-stable";
  scheme.flags = kProper | kStable;
  scheme.size_budget_note = "<= 2 kept points, zero bits";
  scheme.declared_size_cap = 2;

  scheme.compress = [c, orient](const LabeledSample& s) -> CompressionOutput {
    c->check_sample(s);
    // Boundary pair. For the decreasing family 1[x <= t] the boundary is the
    // rightmost 1 and the leftmost 0; roles of the labels swap for the
    // increasing orientation.
    const bool dec = orient == ThresholdOrientation::Decreasing;
    const Rat right_label = dec ? Rat(1) : Rat(0);
    const Rat left_label = dec ? Rat(0) : Rat(1);
    int right_pos = -1, left_pos = -1;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& pr = s.pairs[i];
      if (pr.label == right_label) {
        if (right_pos < 0 || pr.point > s.pairs[right_pos].point) right_pos = static_cast<int>(i);
      } else if (pr.label == left_label) {
        if (left_pos < 0 || pr.point < s.pairs[left_pos].point) left_pos = static_cast<int>(i);
      }
    }
    CompressionOutput out;
    std::vector<int> picks;
    if (right_pos >= 0) picks.push_back(right_pos);
    if (left_pos >= 0) picks.push_back(left_pos);
    std::sort(picks.begin(), picks.end());
    for (int i : picks) {
      out.kept_positions.push_back(static_cast<std::size_t>(i));
      out.kept_pairs.push_back(s.pairs[i]);
    }
    return out;
  };

  scheme.reconstruct = [c](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "threshold scheme carries no bits");
    return first_consistent_predictor(*c, pairs);
  };
  return scheme;
}

CompressionScheme soa_scheme(std::shared_ptr<const FiniteConceptClass> c) {
  if (!c->labels().is_binary())
    fail(ErrorCode::ConstructionError, "soa scheme needs a binary class");
  auto solver = std::make_shared<LittlestoneSolver>(*c);
  auto solver_mutex = std::make_shared<std::mutex>();
  const int d_ld = [&] {
    auto v = solver->full();
    return solver->depth(v);
  }();

  // Three-case predictor from a stored pair set: stored label, version-space
  // unanimity, else the label whose version space has the larger Littlestone
  // dimension (ties predict 1).
  auto make_predictor = [c, solver, solver_mutex](const KeptPairs& pairs) -> Predictor {
    auto v = std::make_shared<LittlestoneSolver::VersionSpace>(solver->full());
    auto stored = std::make_shared<KeptPairs>(pairs);
    for (const auto& [pt, label] : pairs) {
      *v = solver->restrict(*v, pt, label == 1 ? 1 : 0);
      if (solver->empty(*v))
        fail(ErrorCode::Unrealizable, "stored pairs have empty version space");
    }
    Predictor p;
    p.eval = [c, solver, solver_mutex, v, stored](PointId x) -> Rat {
      for (const auto& [pt, label] : *stored)
        if (pt == x) return label;
      auto v0 = solver->restrict(*v, x, 0);
      auto v1 = solver->restrict(*v, x, 1);
      if (solver->empty(v0)) return Rat(1);
      if (solver->empty(v1)) return Rat(0);
      std::lock_guard<std::mutex> lock(*solver_mutex);
      return Rat(solver->depth(v1) >= solver->depth(v0) ? 1 : 0);
    };
    return p;
  };

  CompressionScheme scheme;
  scheme.name = "soa";
  scheme.flags = 0;
  scheme.size_budget_note = "kept <= littlestone dimension, zero bits";
  scheme.declared_size_cap = static_cast<std::size_t>(d_ld);

  scheme.compress = [c, make_predictor](const LabeledSample& s) -> CompressionOutput {
    c->check_sample(s);
    if (!is_realizable(*c, s))
      fail(ErrorCode::Unrealizable, "soa needs a realizable sample");
    std::vector<std::size_t> positions;
    KeptPairs t;
    const std::size_t guard = s.size() + 1;
    for (std::size_t iter = 0; iter <= guard; ++iter) {
      Predictor p = make_predictor(t);
      // Mistake oracle: first violating pair in sample order.
      std::size_t mistake = s.size();
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (p(s.pairs[i].point) != s.pairs[i].label) {
          mistake = i;
          break;
        }
      }
      if (mistake == s.size()) {
        CompressionOutput out;
        std::vector<std::size_t> order(positions);
        std::sort(order.begin(), order.end());
        for (auto pos : order) {
          out.kept_positions.push_back(pos);
          out.kept_pairs.push_back(s.pairs[pos]);
        }
        return out;
      }
      positions.push_back(mistake);
      t.push_back(s.pairs[mistake]);
    }
    fail(ErrorCode::SchemeFailure, "soa failed to stabilize");
  };

  scheme.reconstruct = [make_predictor](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "soa carries no bits");
    return make_predictor(pairs);
  };
  return scheme;
}

CompressionScheme version_space_scheme(std::shared_ptr<const FiniteConceptClass> c, int budget) {
  if (budget < 1) fail(ErrorCode::ConstructionError, "budget must be >= 1");

  auto version_space = [c](const KeptPairs& pairs) {
    std::vector<char> in(c->num_concepts(), 1);
    for (int i = 0; i < c->num_concepts(); ++i)
      for (const auto& [pt, label] : pairs)
        if (c->at(i, pt) != label) {
          in[i] = 0;
          break;
        }
    return in;
  };

  CompressionScheme scheme;
  scheme.name = "version-space";
  scheme.flags = kProper | kStable;
  scheme.size_budget_note = "smallest version-space-pinning subset, zero bits";
  scheme.declared_size_cap = static_cast<std::size_t>(budget);

  scheme.compress = [c, budget, version_space](const LabeledSample& s) -> CompressionOutput {
    c->check_sample(s);
    // Distinct pair contents in content order; selection below depends only
    // on contents, which is what makes the scheme stable.
    std::vector<SamplePair> contents;
    for (const auto& pr : s.pairs) contents.push_back(pr);
    std::sort(contents.begin(), contents.end(), sample_pair_less);
    contents.erase(std::unique(contents.begin(), contents.end(), sample_pair_eq),
                   contents.end());

    KeptPairs all(contents.begin(), contents.end());
    std::vector<char> vs_full = version_space(all);
    const int m = static_cast<int>(contents.size());

    for (int k = 0; k <= std::min(budget, m); ++k) {
      KeptPairs chosen;
      bool hit = first_combination(m, k, [&](const std::vector<int>& idx) {
        KeptPairs pairs;
        for (int i : idx) pairs.push_back(contents[i]);
        if (version_space(pairs) == vs_full) {
          chosen = std::move(pairs);
          return true;
        }
        return false;
      });
      if (hit) {
        CompressionOutput out;
        std::vector<std::size_t> positions;
        for (const auto& pr : chosen) {
          for (std::size_t i = 0; i < s.size(); ++i) {
            if (sample_pair_eq(s.pairs[i], pr)) {
              positions.push_back(i);
              break;
            }
          }
        }
        std::sort(positions.begin(), positions.end());
        for (auto pos : positions) {
          out.kept_positions.push_back(pos);
          out.kept_pairs.push_back(s.pairs[pos]);
        }
        return out;
      }
    }
    fail(ErrorCode::BudgetExceeded, "no version-space-pinning subset within budget");
  };

  scheme.reconstruct = [c](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "version-space scheme carries no bits");
    return first_consistent_predictor(*c, pairs);
  };
  return scheme;
}

ValidityReport verify_validity(const CompressionScheme& scheme, const FiniteConceptClass& c,
                               const std::vector<LabeledSample>& corpus, const LossSpec& loss,
                               const Rat& eps) {
  ValidityReport report;
  for (const auto& s : corpus) {
    ValidityRow row;
    CompressionOutput out = scheme.compress(s);
    row.size = out.size();

    row.wellformed = out.kept_positions.size() == out.kept_pairs.size();
    for (std::size_t i = 0; row.wellformed && i < out.kept_positions.size(); ++i) {
      auto pos = out.kept_positions[i];
      if (pos >= s.size()) row.wellformed = false;
      else if (i > 0 && out.kept_positions[i - 1] >= pos) row.wellformed = false;
      else if (out.kept_pairs[i].point != s.pairs[pos].point) row.wellformed = false;
      else if (!scheme.relabels && out.kept_pairs[i].label != s.pairs[pos].label)
        row.wellformed = false;
    }

    Predictor p = scheme.reconstruct(out.kept_pairs, out.bits);
    if (s.empty()) {
      row.loss = 0;
      row.within_eps = true;
    } else {
      row.loss = empirical_loss(p, s, loss, c.labels());
      row.within_eps = row.loss <= eps;
    }
    if (scheme.declared_size_cap) row.size_ok = row.size <= *scheme.declared_size_cap;
    report.rows.push_back(std::move(row));
  }
  return report;
}

StabilityReport verify_stability(const CompressionScheme& scheme, const LabeledSample& s,
                                 int exhaustive_gap_limit, int random_trials,
                                 std::uint64_t seed) {
  StabilityReport report;
  CompressionOutput base = scheme.compress(s);
  std::vector<char> kept_mask(s.size(), 0);
  for (auto pos : base.kept_positions) kept_mask.at(pos) = 1;
  std::vector<std::size_t> gap;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!kept_mask[i]) gap.push_back(i);

  auto check_subset = [&](const std::vector<char>& include) {
    std::vector<std::size_t> positions(base.kept_positions.begin(), base.kept_positions.end());
    for (std::size_t g = 0; g < gap.size(); ++g)
      if (include[g]) positions.push_back(gap[g]);
    std::sort(positions.begin(), positions.end());
    LabeledSample t;
    for (auto pos : positions) t.pairs.push_back(s.pairs[pos]);
    CompressionOutput out = scheme.compress(t);
    if (!pair_multisets_equal(out.kept_pairs, base.kept_pairs) || out.bits != base.bits) {
      report.pass = false;
      report.witness_positions = positions;
      return false;
    }
    return true;
  };

  if (static_cast<int>(gap.size()) <= exhaustive_gap_limit) {
    const std::uint64_t total = std::uint64_t(1) << gap.size();
    for (std::uint64_t bitsel = 0; bitsel < total; ++bitsel) {
      std::vector<char> include(gap.size(), 0);
      for (std::size_t g = 0; g < gap.size(); ++g)
        if ((bitsel >> g) & 1u) include[g] = 1;
      if (!check_subset(include)) return report;
    }
    report.exhaustive = true;
  } else {
    report.exhaustive = false;
    Rng rng(seed);
    for (int trial = 0; trial < random_trials; ++trial) {
      std::vector<char> include(gap.size(), 0);
      for (std::size_t g = 0; g < gap.size(); ++g) include[g] = rng.below(2) == 1 ? 1 : 0;
      if (!check_subset(include)) return report;
    }
  }
  return report;
}

FlagReport verify_flag(const CompressionScheme& scheme, SchemeFlag flag,
                       const FiniteConceptClass& c, const std::vector<LabeledSample>& corpus) {
  FlagReport report;
  for (std::size_t si = 0; si < corpus.size(); ++si) {
    CompressionOutput out = scheme.compress(corpus[si]);
    Predictor p = scheme.reconstruct(out.kept_pairs, out.bits);
    bool ok = true;
    if (flag == kProper) {
      bool matched = false;
      for (int r = 0; r < c.num_concepts() && !matched; ++r) {
        bool same = true;
        for (PointId x = 0; x < c.domain().size(); ++x) {
          if (p(x) != c.at(r, x)) {
            same = false;
            break;
          }
        }
        matched = same;
      }
      ok = matched;
    } else if (flag == kMajorityVote) {
      if (!p.majority_rows) {
        report.structural_ok = false;
        report.pass = false;
        report.first_failure = static_cast<int>(si);
        return report;
      }
      for (PointId x = 0; x < c.domain().size() && ok; ++x) {
        std::size_t ones = 0;
        for (int r : *p.majority_rows)
          if (c.at(r, x) == 1) ++ones;
        Rat maj(2 * ones > p.majority_rows->size() ? 1 : 0);
        ok = (p(x) == maj);
      }
    } else {
      fail(ErrorCode::InvalidArgument, "verify_flag covers proper and majorityVote");
    }
    if (!ok) {
      report.pass = false;
      report.first_failure = static_cast<int>(si);
      return report;
    }
  }
  return report;
}

}  // namespace scompress
