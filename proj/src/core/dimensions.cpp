#include "core/dimensions.hpp"

#include <algorithm>
#include <unordered_map>

#include "core/error.hpp"

namespace scompress {

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > (std::uint64_t(1) << 62) / (n - k + i)) return std::uint64_t(-1);
    r = r * (n - k + i) / i;
  }
  return r;
}

// Enumerates k-subsets of 0..n-1 in lexicographic order until f returns true.
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

bool all_patterns_hit(const std::vector<std::uint32_t>& masks, int k) {
  const std::uint32_t want = 1u << k;
  std::vector<char> seen(want, 0);
  std::uint32_t found = 0;
  for (auto m : masks) {
    if (!seen[m]) {
      seen[m] = 1;
      if (++found == want) return true;
    }
  }
  return false;
}

// Generic enumeration by increasing set size. shattered(pts, witness_out)
// decides one candidate set and fills the label witness on success.
template <typename Shattered>
DimensionReport search_dimension(int n, int num_concepts, const DimensionLimits& limits,
                                 Shattered&& shattered) {
  DimensionReport report;
  report.value = 0;
  report.exhaustive = true;
  for (int k = 1; k <= std::min(n, limits.max_set_size); ++k) {
    if (num_concepts >= 0 && (k >= 63 || (std::uint64_t(1) << k) > std::uint64_t(num_concepts))) {
      // No k-set can realize 2^k patterns: refuted without enumeration.
      return report;
    }
    if (binom(n, k) > limits.max_subsets) {
      report.exhaustive = false;
      return report;
    }
    std::vector<PointId> found_pts;
    std::vector<Rat> found_labels;
    bool hit = first_combination(n, k, [&](const std::vector<int>& idx) {
      std::vector<PointId> pts(idx.begin(), idx.end());
      std::vector<Rat> labels;
      if (shattered(pts, labels)) {
        found_pts = pts;
        found_labels = labels;
        return true;
      }
      return false;
    });
    if (!hit) return report;
    report.value = k;
    report.witness_points = found_pts;
    report.witness_labels = found_labels;
  }
  if (report.value == limits.max_set_size && limits.max_set_size < n) {
    // Larger sets were never examined, unless the concept count already
    // refutes them.
    const int next = limits.max_set_size + 1;
    const bool refuted_by_count =
        num_concepts >= 0 && next < 63 && (std::uint64_t(1) << next) > std::uint64_t(num_concepts);
    report.exhaustive = refuted_by_count;
  }
  return report;
}

}  // namespace

bool verify_vc_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts) {
  const int k = static_cast<int>(pts.size());
  if (k == 0) return true;
  if (k > 25) return false;
  std::vector<std::uint32_t> masks;
  masks.reserve(c.num_concepts());
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    std::uint32_t m = 0;
    for (int i = 0; i < k; ++i)
      if (c.at(ci, pts[i]) == 1) m |= (1u << i);
    masks.push_back(m);
  }
  return all_patterns_hit(masks, k);
}

bool verify_graph_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts,
                          const std::vector<Rat>& labels) {
  const int k = static_cast<int>(pts.size());
  if (k == 0) return true;
  if (labels.size() != pts.size() || k > 25) return false;
  std::vector<std::uint32_t> masks;
  masks.reserve(c.num_concepts());
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    std::uint32_t m = 0;
    for (int i = 0; i < k; ++i)
      if (c.at(ci, pts[i]) == labels[i]) m |= (1u << i);
    masks.push_back(m);
  }
  return all_patterns_hit(masks, k);
}

bool verify_pseudo_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts,
                           const std::vector<Rat>& thresholds) {
  const int k = static_cast<int>(pts.size());
  if (k == 0) return true;
  if (thresholds.size() != pts.size() || k > 25) return false;
  std::vector<std::uint32_t> masks;
  masks.reserve(c.num_concepts());
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    std::uint32_t m = 0;
    for (int i = 0; i < k; ++i)
      if (c.at(ci, pts[i]) <= thresholds[i]) m |= (1u << i);
    masks.push_back(m);
  }
  return all_patterns_hit(masks, k);
}

bool verify_partial_witness(const PartialConceptClass& c, const std::vector<PointId>& pts) {
  const int k = static_cast<int>(pts.size());
  if (k == 0) return true;
  if (k > 25) return false;
  std::vector<std::uint32_t> masks;
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    bool covered = true;
    std::uint32_t m = 0;
    for (int i = 0; i < k; ++i) {
      int v = c.at(ci, pts[i]);
      if (v == PartialConceptClass::kStar) {
        covered = false;
        break;
      }
      if (v == 1) m |= (1u << i);
    }
    if (covered) masks.push_back(m);
  }
  return all_patterns_hit(masks, k);
}

DimensionReport vc_dimension(const FiniteConceptClass& c, DimensionLimits limits) {
  if (!c.labels().is_binary()) fail(ErrorCode::TypeMismatch, "vc_dimension needs binary labels");
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "vc_dimension of empty class");
  return search_dimension(
      c.domain().size(), c.num_concepts(), limits,
      [&](const std::vector<PointId>& pts, std::vector<Rat>&) {
        return verify_vc_witness(c, pts);
      });
}

DimensionReport graph_dimension(const FiniteConceptClass& c, DimensionLimits limits) {
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "graph_dimension of empty class");
  // Witness labels are searched over labels attained at each point; an
  // unattained label yields indicator 0 for every concept, so it can never
  // help shatter.
  return search_dimension(
      c.domain().size(), c.num_concepts(), limits,
      [&](const std::vector<PointId>& pts, std::vector<Rat>& witness) {
        const int k = static_cast<int>(pts.size());
        std::vector<std::vector<int>> attained;
        for (auto p : pts) attained.push_back(c.attained_value_indices(p));
        std::vector<int> choice(k, 0);
        while (true) {
          const std::uint32_t want = 1u << k;
          std::vector<char> seen(want, 0);
          std::uint32_t found = 0;
          bool ok = false;
          for (int ci = 0; ci < c.num_concepts() && !ok; ++ci) {
            std::uint32_t m = 0;
            for (int i = 0; i < k; ++i)
              if (c.value_index(ci, pts[i]) == attained[i][choice[i]]) m |= (1u << i);
            if (!seen[m]) {
              seen[m] = 1;
              if (++found == want) ok = true;
            }
          }
          if (ok) {
            witness.clear();
            for (int i = 0; i < k; ++i) witness.push_back(c.values()[attained[i][choice[i]]]);
            return true;
          }
          int i = k - 1;
          while (i >= 0 && choice[i] + 1 == static_cast<int>(attained[i].size())) {
            choice[i] = 0;
            --i;
          }
          if (i < 0) return false;
          ++choice[i];
        }
      });
}

DimensionReport pseudo_dimension(const FiniteConceptClass& c, DimensionLimits limits) {
  if (!c.labels().is_real()) fail(ErrorCode::TypeMismatch, "pseudo_dimension needs realGrid labels");
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "pseudo_dimension of empty class");
  // Thresholds are searched over values attained at each point; moving a
  // threshold to the largest attained value below it never changes any
  // indicator, so this restriction is exact.
  return search_dimension(
      c.domain().size(), c.num_concepts(), limits,
      [&](const std::vector<PointId>& pts, std::vector<Rat>& witness) {
        const int k = static_cast<int>(pts.size());
        std::vector<std::vector<int>> attained;
        for (auto p : pts) attained.push_back(c.attained_value_indices(p));
        std::vector<int> choice(k, 0);
        while (true) {
          const std::uint32_t want = 1u << k;
          std::vector<char> seen(want, 0);
          std::uint32_t found = 0;
          bool ok = false;
          for (int ci = 0; ci < c.num_concepts() && !ok; ++ci) {
            std::uint32_t m = 0;
            for (int i = 0; i < k; ++i)
              if (c.value_index(ci, pts[i]) <= attained[i][choice[i]]) m |= (1u << i);
            if (!seen[m]) {
              seen[m] = 1;
              if (++found == want) ok = true;
            }
          }
          if (ok) {
            witness.clear();
            for (int i = 0; i < k; ++i) witness.push_back(c.values()[attained[i][choice[i]]]);
            return true;
          }
          int i = k - 1;
          while (i >= 0 && choice[i] + 1 == static_cast<int>(attained[i].size())) {
            choice[i] = 0;
            --i;
          }
          if (i < 0) return false;
          ++choice[i];
        }
      });
}

DimensionReport partial_vc_dimension(const PartialConceptClass& c, DimensionLimits limits) {
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "partial_vc_dimension of empty class");
  return search_dimension(
      c.domain().size(), c.num_concepts(), limits,
      [&](const std::vector<PointId>& pts, std::vector<Rat>&) {
        return verify_partial_witness(c, pts);
      });
}

LittlestoneSolver::LittlestoneSolver(const FiniteConceptClass& c)
    : class_(c), num_points_(c.domain().size()) {
  if (!c.labels().is_binary())
    fail(ErrorCode::TypeMismatch, "littlestone dimension needs binary labels");
  const int words = (c.num_concepts() + 63) / 64;
  mask0_.assign(num_points_, VersionSpace(words, 0));
  mask1_.assign(num_points_, VersionSpace(words, 0));
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    for (PointId p = 0; p < num_points_; ++p) {
      auto& m = (c.at(ci, p) == 1) ? mask1_[p] : mask0_[p];
      m[ci / 64] |= (std::uint64_t(1) << (ci % 64));
    }
  }
}

LittlestoneSolver::VersionSpace LittlestoneSolver::full() const {
  const int n = class_.num_concepts();
  const int words = (n + 63) / 64;
  VersionSpace v(words, 0);
  for (int ci = 0; ci < n; ++ci) v[ci / 64] |= (std::uint64_t(1) << (ci % 64));
  return v;
}

LittlestoneSolver::VersionSpace LittlestoneSolver::restrict(const VersionSpace& v, PointId p,
                                                            int binary_label) const {
  const auto& m = binary_label == 1 ? mask1_[p] : mask0_[p];
  VersionSpace out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] & m[i];
  return out;
}

bool LittlestoneSolver::empty(const VersionSpace& v) const {
  for (auto w : v)
    if (w) return false;
  return true;
}

int LittlestoneSolver::count(const VersionSpace& v) const {
  int n = 0;
  for (auto w : v) n += __builtin_popcountll(w);
  return n;
}

int LittlestoneSolver::first_concept(const VersionSpace& v) const {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) return static_cast<int>(i * 64 + __builtin_ctzll(v[i]));
  return -1;
}

int LittlestoneSolver::depth(const VersionSpace& v) {
  if (empty(v)) fail(ErrorCode::InvalidArgument, "littlestone depth of empty version space");
  auto it = memo_.find(v);
  if (it != memo_.end()) return it->second;
  int best = 0;
  for (PointId p = 0; p < num_points_; ++p) {
    VersionSpace v0 = restrict(v, p, 0);
    if (empty(v0)) continue;
    VersionSpace v1 = restrict(v, p, 1);
    if (empty(v1)) continue;
    int d = 1 + std::min(depth(v0), depth(v1));
    best = std::max(best, d);
  }
  memo_[v] = best;
  return best;
}

std::vector<PointId> LittlestoneSolver::tree(const VersionSpace& v, int d) {
  if (d == 0) return {};
  for (PointId p = 0; p < num_points_; ++p) {
    VersionSpace v0 = restrict(v, p, 0);
    if (empty(v0)) continue;
    VersionSpace v1 = restrict(v, p, 1);
    if (empty(v1)) continue;
    if (std::min(depth(v0), depth(v1)) >= d - 1) {
      std::vector<PointId> left = tree(v0, d - 1);
      std::vector<PointId> right = tree(v1, d - 1);
      // Level-order merge of the two depth d-1 subtrees under root p.
      std::vector<PointId> out{p};
      std::size_t lpos = 0, rpos = 0, width = 1;
      while (lpos < left.size()) {
        for (std::size_t i = 0; i < width; ++i) out.push_back(left[lpos + i]);
        for (std::size_t i = 0; i < width; ++i) out.push_back(right[rpos + i]);
        lpos += width;
        rpos += width;
        width *= 2;
      }
      return out;
    }
  }
  fail(ErrorCode::InvalidArgument, "no mistake tree of requested depth");
}

DimensionReport littlestone_dimension(const FiniteConceptClass& c) {
  if (c.num_concepts() == 0) fail(ErrorCode::EmptyClass, "littlestone of empty class");
  LittlestoneSolver solver(c);
  DimensionReport report;
  auto all = solver.full();
  report.value = solver.depth(all);
  report.witness_points = solver.tree(all, report.value);
  report.exhaustive = true;
  return report;
}

bool verify_littlestone_tree(const FiniteConceptClass& c,
                             const std::vector<PointId>& level_order_tree, int depth) {
  if (depth == 0) return level_order_tree.empty();
  if (level_order_tree.size() != (std::size_t(1) << depth) - 1) return false;
  // Every root-to-leaf path must be realized by some concept.
  const std::uint32_t paths = 1u << depth;
  for (std::uint32_t bits = 0; bits < paths; ++bits) {
    LabeledSample s;
    std::size_t node = 0;
    for (int d = 0; d < depth; ++d) {
      int b = (bits >> d) & 1;
      s.add(level_order_tree[node], Rat(b));
      node = 2 * node + 1 + b;
    }
    if (!is_realizable(c, s)) return false;
  }
  return true;
}

}  // namespace scompress
