#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/bits.hpp"
#include "core/concepts.hpp"

namespace scompress {

enum SchemeFlag : unsigned {
  kProper = 1u,
  kMajorityVote = 2u,
  kStable = 4u,
};

bool sample_pair_less(const SamplePair& a, const SamplePair& b);
bool sample_pair_eq(const SamplePair& a, const SamplePair& b);
// Equality as multisets of (point, label) contents; positions shift under
// subsequence removal, so stability comparisons use this.
bool pair_multisets_equal(const std::vector<SamplePair>& a, const std::vector<SamplePair>& b);

// Compressor output: an ordered subsequence of the input sample plus a finite
// bitstring. size = |kept| + |bits|.
struct CompressionOutput {
  std::vector<std::size_t> kept_positions;  // strictly increasing
  std::vector<SamplePair> kept_pairs;
  Bits bits;
  nlohmann::json audit;  // reduction size-accounting metadata; not counted

  std::size_t size() const { return kept_pairs.size() + bits.size(); }
};

using KeptPairs = std::vector<SamplePair>;

// A paired compressor/reconstructor. reconstruct sees only (kept pairs, bits);
// the type boundary is the only channel between the two sides.
struct CompressionScheme {
  std::string name;
  unsigned flags = 0;
  std::string size_budget_note;
  std::optional<std::size_t> declared_size_cap;
  // Agnostic wrappers keep original positions but store relabeled pairs; the
  // well-formedness check then matches points only.
  bool relabels = false;

  std::function<CompressionOutput(const LabeledSample&)> compress;
  std::function<Predictor(const KeptPairs&, const Bits&)> reconstruct;

  bool has_flag(SchemeFlag f) const { return (flags & f) != 0; }
};

// Reconstructs to the canonically-first concept consistent with the kept set;
// compresses to the lexicographically-first smallest subsequence whose
// reconstruction has zero loss on the input. Zero bits. Proper.
CompressionScheme proper_exhaustive_scheme(std::shared_ptr<const FiniteConceptClass> c,
                                           int budget);

// Multiplicative-weights boosting; reconstruct replays each round's concept
// from its stored support subsample and outputs the majority (ties -> 0).
CompressionScheme majority_boost_scheme(std::shared_ptr<const FiniteConceptClass> c);

// Boundary-pair scheme for one-dimensional threshold families, orientation
// auto-detected. Keeps at most 2 points. Proper and stable.
CompressionScheme threshold_stable_scheme(std::shared_ptr<const FiniteConceptClass> c);

// Mistake-driven compression around the standard optimal online predictor:
// the kept set is the mistake sequence; size is at most the Littlestone
// dimension. No flags claimed.
CompressionScheme soa_scheme(std::shared_ptr<const FiniteConceptClass> c);

// Keeps a smallest (content-lexicographically-first) subset of the distinct
// sample pairs that pins the exact version space of the input; reconstructs
// to the canonically-first member. Works over any finite class, and is proper
// and stable by construction. This is the generic stable substrate used on
// inflated carriers, where no one-dimensional threshold structure exists.
CompressionScheme version_space_scheme(std::shared_ptr<const FiniteConceptClass> c,
                                       int budget = 8);

struct ValidityRow {
  bool wellformed = false;
  bool within_eps = false;
  bool size_ok = true;
  std::size_t size = 0;
  Rat loss;
};

struct ValidityReport {
  std::vector<ValidityRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!(r.wellformed && r.within_eps && r.size_ok)) return false;
    return true;
  }
  int first_failure() const {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!(rows[i].wellformed && rows[i].within_eps && rows[i].size_ok))
        return static_cast<int>(i);
    return -1;
  }
};

// Per-sample consistency (loss <= eps; eps = 0 is the exact realizable
// contract) plus declared size-cap adherence.
ValidityReport verify_validity(const CompressionScheme& scheme, const FiniteConceptClass& c,
                               const std::vector<LabeledSample>& corpus, const LossSpec& loss,
                               const Rat& eps);

struct StabilityReport {
  bool pass = true;
  bool exhaustive = true;
  // Positions (into S) of a violating T, when found.
  std::vector<std::size_t> witness_positions;
};

// Checks kappa(T) = kappa(S) for kept(S) <= T <= S: all T when the gap has at
// most exhaustive_gap_limit points, otherwise random_trials seeded draws.
// Outputs compare as multisets of (point, label) pairs plus exact bits.
StabilityReport verify_stability(const CompressionScheme& scheme, const LabeledSample& s,
                                 int exhaustive_gap_limit = 12, int random_trials = 256,
                                 std::uint64_t seed = 0x5eed5eed5eed5eedULL);

struct FlagReport {
  bool structural_ok = true;
  bool pass = true;
  int first_failure = -1;
};

// proper: reconstruction equals some table row pointwise on the whole domain.
// majorityVote: reconstruction exposes its concept list and the pointwise
// majority recomputation matches (binary classes).
FlagReport verify_flag(const CompressionScheme& scheme, SchemeFlag flag,
                       const FiniteConceptClass& c, const std::vector<LabeledSample>& corpus);

}  // namespace scompress
