#pragma once

#include <cstdint>
#include <vector>

#include "core/class_io.hpp"
#include "core/concepts.hpp"

namespace scompress {

// Witness layout per kind:
//   vc/graph/pseudo/partial: points = the shattered set, labels = the witness
//   labels (graph) or thresholds (pseudo).
//   littlestone: points = a complete mistake tree of depth `value` in level
//   order (2^value - 1 entries), labels unused.
struct DimensionReport {
  int value = 0;
  std::vector<PointId> witness_points;
  std::vector<Rat> witness_labels;
  bool exhaustive = true;
};

// Enumeration stops at max_set_size; a search that would exceed max_subsets
// candidate sets at one size is reported capped instead of running forever.
// The 2^k > #concepts refutation still counts as exhaustive.
struct DimensionLimits {
  int max_set_size = 6;
  std::uint64_t max_subsets = 80000000;
};

DimensionReport vc_dimension(const FiniteConceptClass& c, DimensionLimits limits = {});
DimensionReport graph_dimension(const FiniteConceptClass& c, DimensionLimits limits = {});
DimensionReport pseudo_dimension(const FiniteConceptClass& c, DimensionLimits limits = {});
DimensionReport littlestone_dimension(const FiniteConceptClass& c);
DimensionReport partial_vc_dimension(const PartialConceptClass& c, DimensionLimits limits = {});

// Witness re-verification; each recomputes the shattering from scratch.
bool verify_vc_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts);
bool verify_graph_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts,
                          const std::vector<Rat>& labels);
bool verify_pseudo_witness(const FiniteConceptClass& c, const std::vector<PointId>& pts,
                           const std::vector<Rat>& thresholds);
bool verify_partial_witness(const PartialConceptClass& c, const std::vector<PointId>& pts);
bool verify_littlestone_tree(const FiniteConceptClass& c,
                             const std::vector<PointId>& level_order_tree, int depth);

// Littlestone dimension of a version space, memoized per solver instance.
// Shared by the dimension oracle and the SOA predictor.
class LittlestoneSolver {
 public:
  explicit LittlestoneSolver(const FiniteConceptClass& c);

  using VersionSpace = std::vector<std::uint64_t>;

  VersionSpace full() const;
  VersionSpace restrict(const VersionSpace& v, PointId p, int binary_label) const;
  bool empty(const VersionSpace& v) const;
  int count(const VersionSpace& v) const;
  int first_concept(const VersionSpace& v) const;  // -1 when empty
  int depth(const VersionSpace& v);

  // Builds a complete mistake tree (level order) of the given depth.
  std::vector<PointId> tree(const VersionSpace& v, int d);

 private:
  struct VsHash {
    std::size_t operator()(const VersionSpace& v) const {
      std::size_t h = 1469598103934665603ull;
      for (auto w : v) h = (h ^ w) * 1099511628211ull;
      return h;
    }
  };

  const FiniteConceptClass& class_;
  int num_points_;
  std::vector<VersionSpace> mask0_, mask1_;  // per point: concepts labeling 0 / 1
  std::unordered_map<VersionSpace, int, VsHash> memo_;
};

}  // namespace scompress
