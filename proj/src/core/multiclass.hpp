#pragma once

#include <memory>

#include "core/schemes.hpp"

namespace scompress {

// Builds a substrate scheme for a given (inflated) binary carrier class.
using SubstrateFactory =
    std::function<CompressionScheme(std::shared_ptr<const FiniteConceptClass>)>;

// Carrier of the inflated binary problem: pairs (x, y) ordered
// lexicographically by (point index, label index). The ordering is canonical;
// bit encodings depend on it.
struct Inflation {
  std::shared_ptr<const FiniteDomain> pair_domain;
  int num_labels = 0;

  PointId pair_point(PointId x, int label_index) const { return x * num_labels + label_index; }
  PointId base_point(PointId pair) const { return pair / num_labels; }
  int label_index(PointId pair) const { return pair % num_labels; }
};

Inflation make_inflation(const FiniteConceptClass& c);

// g_c(x,y) = 1[c(x) = y], one binary concept per c, concept order preserved.
std::shared_ptr<const FiniteConceptClass> inflate_class(const FiniteConceptClass& c);

// ((x_i, y), 1[y = y_i]) for every i and label y, sample order major.
LabeledSample inflate_sample(const LabeledSample& s, const FiniteConceptClass& c);

// General reduction: runs the substrate on the inflated sample; kept points
// map back to original positions, label indices travel in the bitstring.
// Size <= f * (1 + ceil(log2 |Y|)) + self-delimiting prefix.
CompressionScheme reduce_general(const SubstrateFactory& substrate,
                                 std::shared_ptr<const FiniteConceptClass> c);

// Proper/majority reduction: feeds only the positively-labeled inflated
// pairs, so no label bits are needed. Size <= f + substrate bits.
CompressionScheme reduce_proper_or_majority(const SubstrateFactory& substrate,
                                            std::shared_ptr<const FiniteConceptClass> c);

// Stable reduction: keeps the original pairs whose point survived the
// substrate's compression of the full inflation; reconstruction re-inflates
// and re-runs the substrate. Stability of the substrate makes both runs
// agree; a runtime check raises AssumptionViolation when it does not.
CompressionScheme reduce_stable(const SubstrateFactory& substrate,
                                std::shared_ptr<const FiniteConceptClass> c);

struct GraphDim1Stats {
  std::size_t iterations = 0;       // deepest-point moves, including z_1
  bool strict_shrink = true;        // consistent set shrank strictly each move
  std::size_t chain_bound = 0;      // points above z_1 in the tree ordering
};

// Size-1 scheme for classes of graph dimension <= 1, built on the tree
// ordering of the sample points. c_0 is the canonically-first concept.
CompressionScheme graphdim1_scheme(std::shared_ptr<const FiniteConceptClass> c);
CompressionOutput graphdim1_compress_with_stats(const FiniteConceptClass& c,
                                                const LabeledSample& s, GraphDim1Stats* stats);

// Inflated scheme for the k-piecewise-threshold class: keeps the leftmost and
// rightmost positive pair per label value. Size <= 2k, stable. Input samples
// live over the inflation of piecewise_class.
CompressionScheme piecewise_threshold_inflated_scheme(
    int k, std::shared_ptr<const FiniteConceptClass> piecewise_class);

// Exact-agnostic wrapper: compresses the largest ERM-correct subsequence.
// Output loss <= ERM loss under zero-one, exactly.
CompressionScheme agnostic_wrap(const CompressionScheme& realizable_scheme,
                                std::shared_ptr<const FiniteConceptClass> c);

}  // namespace scompress
