#include "core/multiclass.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "core/dimensions.hpp"
#include "core/error.hpp"

namespace scompress {

Inflation make_inflation(const FiniteConceptClass& c) {
  Inflation inf;
  inf.num_labels = c.labels().universe_size();
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(c.domain().size()) * inf.num_labels);
  for (PointId x = 0; x < c.domain().size(); ++x)
    for (int y = 0; y < inf.num_labels; ++y)
      names.push_back(c.domain().name(x) + "|" + rat_to_string(c.labels().value(y)));
  inf.pair_domain = std::make_shared<const FiniteDomain>(std::move(names));
  return inf;
}

std::shared_ptr<const FiniteConceptClass> inflate_class(const FiniteConceptClass& c) {
  Inflation inf = make_inflation(c);
  std::vector<std::vector<Rat>> table;
  table.reserve(c.num_concepts());
  for (int ci = 0; ci < c.num_concepts(); ++ci) {
    std::vector<Rat> row(inf.pair_domain->size());
    for (PointId x = 0; x < c.domain().size(); ++x)
      for (int y = 0; y < inf.num_labels; ++y)
        row[inf.pair_point(x, y)] = Rat(c.at(ci, x) == c.labels().value(y) ? 1 : 0);
    table.push_back(std::move(row));
  }
  return std::make_shared<const FiniteConceptClass>(inf.pair_domain, LabelSpace::binary(),
                                                    std::move(table), c.concept_names());
}

LabeledSample inflate_sample(const LabeledSample& s, const FiniteConceptClass& c) {
  Inflation inf = make_inflation(c);
  LabeledSample out;
  out.pairs.reserve(s.size() * inf.num_labels);
  for (const auto& [pt, label] : s.pairs)
    for (int y = 0; y < inf.num_labels; ++y)
      out.add(inf.pair_point(pt, y), Rat(c.labels().value(y) == label ? 1 : 0));
  return out;
}

namespace {

// Groups kept positions of an inflated compression by original sample index;
// the group layout is (sample index ascending, minor index ascending), which
// is exactly the substrate's kept order.
struct InflatedGroups {
  std::vector<std::size_t> originals;          // ascending positions into S
  std::vector<std::vector<int>> minor_indices; // per original, ascending
  std::size_t total = 0;
};

InflatedGroups group_kept(const std::vector<std::size_t>& kept_positions, int minor_size) {
  InflatedGroups g;
  for (auto pos : kept_positions) {
    std::size_t orig = pos / minor_size;
    int minor = static_cast<int>(pos % minor_size);
    if (g.originals.empty() || g.originals.back() != orig) {
      g.originals.push_back(orig);
      g.minor_indices.emplace_back();
    }
    g.minor_indices.back().push_back(minor);
    ++g.total;
  }
  return g;
}

}  // namespace

CompressionScheme reduce_general(const SubstrateFactory& substrate,
                                 std::shared_ptr<const FiniteConceptClass> c) {
  auto inflated = inflate_class(*c);
  auto bin = std::make_shared<CompressionScheme>(substrate(inflated));
  Inflation inf = make_inflation(*c);
  const int width = ceil_log2(static_cast<std::uint64_t>(inf.num_labels));

  CompressionScheme scheme;
  scheme.name = "reduce-general[" + bin->name + "]";
  scheme.size_budget_note = "f*(1+ceil(log2 |Y|)) + prefix";

  scheme.compress = [c, bin, inf, width](const LabeledSample& s) -> CompressionOutput {
    LabeledSample sy = inflate_sample(s, *c);
    CompressionOutput sub = bin->compress(sy);
    InflatedGroups groups = group_kept(sub.kept_positions, inf.num_labels);

    CompressionOutput out;
    BitWriter w;
    std::size_t prefix_bits = 0;
    for (std::size_t j = 0; j < groups.originals.size(); ++j) {
      auto pos = groups.originals[j];
      out.kept_positions.push_back(pos);
      out.kept_pairs.push_back(s.pairs[pos]);
      std::size_t before = w.bits().size();
      w.write_gamma(groups.minor_indices[j].size());
      prefix_bits += w.bits().size() - before;
      for (int y : groups.minor_indices[j]) w.write_uint(static_cast<std::uint64_t>(y), width);
    }
    std::size_t before = w.bits().size();
    w.write_gamma(sub.bits.size() + 1);
    prefix_bits += w.bits().size() - before;
    w.write_bits(sub.bits);
    out.bits = w.bits();

    out.audit = {{"f_kept", sub.kept_pairs.size()},
                 {"f_bits", sub.bits.size()},
                 {"f", sub.size()},
                 {"prefix_bits", prefix_bits},
                 {"index_bits", groups.total * width},
                 {"label_universe", inf.num_labels}};
    return out;
  };

  scheme.reconstruct = [c, bin, inf, width](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    BitReader r(bits);
    KeptPairs rebuilt;
    for (const auto& [pt, label] : pairs) {
      auto count = r.read_gamma();
      auto truth = c->labels().index_of(label);
      if (!truth) fail(ErrorCode::DecodeError, "kept label outside the label universe");
      for (std::uint64_t i = 0; i < count; ++i) {
        auto y = static_cast<int>(r.read_uint(width));
        if (y >= inf.num_labels) fail(ErrorCode::DecodeError, "label index out of range");
        rebuilt.push_back({inf.pair_point(pt, y), Rat(y == *truth ? 1 : 0)});
      }
    }
    auto sub_len = r.read_gamma() - 1;
    Bits sub_bits = r.read_bits(sub_len);
    if (!r.done()) fail(ErrorCode::DecodeError, "trailing bits in reduction output");

    auto h = std::make_shared<Predictor>(bin->reconstruct(rebuilt, sub_bits));
    Predictor p;
    auto cls = c;
    p.eval = [cls, h, inf](PointId x) -> Rat {
      for (int y = 0; y < inf.num_labels; ++y)
        if ((*h)(inf.pair_point(x, y)) == 1) return cls->labels().value(y);
      return cls->labels().value(0);
    };
    return p;
  };
  return scheme;
}

CompressionScheme reduce_proper_or_majority(const SubstrateFactory& substrate,
                                            std::shared_ptr<const FiniteConceptClass> c) {
  auto inflated = inflate_class(*c);
  auto bin = std::make_shared<CompressionScheme>(substrate(inflated));
  if (!(bin->has_flag(kProper) || bin->has_flag(kMajorityVote)))
    fail(ErrorCode::ConstructionError,
         "proper/majority reduction needs a proper or majority-vote substrate");
  Inflation inf = make_inflation(*c);

  CompressionScheme scheme;
  scheme.name = "reduce-proper-majority[" + bin->name + "]";
  scheme.size_budget_note = "f + substrate bits + prefix";

  auto positives = [c, inf](const LabeledSample& s) {
    LabeledSample t;
    t.pairs.reserve(s.size());
    for (const auto& [pt, label] : s.pairs) {
      auto y = c->labels().index_of(label);
      if (!y) fail(ErrorCode::TypeMismatch, "sample label outside the label universe");
      t.add(inf.pair_point(pt, *y), Rat(1));
    }
    return t;
  };

  scheme.compress = [c, bin, positives](const LabeledSample& s) -> CompressionOutput {
    LabeledSample t = positives(s);
    CompressionOutput sub = bin->compress(t);

    CompressionOutput out;
    for (auto pos : sub.kept_positions) {
      out.kept_positions.push_back(pos);
      out.kept_pairs.push_back(s.pairs[pos]);
    }
    BitWriter w;
    w.write_gamma(sub.bits.size() + 1);
    std::size_t prefix_bits = w.bits().size();
    w.write_bits(sub.bits);
    out.bits = w.bits();
    out.audit = {{"f_kept", sub.kept_pairs.size()},
                 {"f_bits", sub.bits.size()},
                 {"f", sub.size()},
                 {"prefix_bits", prefix_bits},
                 {"index_bits", 0}};
    return out;
  };

  scheme.reconstruct = [c, bin, inf](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    BitReader r(bits);
    auto sub_len = r.read_gamma() - 1;
    Bits sub_bits = r.read_bits(sub_len);
    if (!r.done()) fail(ErrorCode::DecodeError, "trailing bits in reduction output");
    KeptPairs rebuilt;
    for (const auto& [pt, label] : pairs) {
      auto y = c->labels().index_of(label);
      if (!y) fail(ErrorCode::DecodeError, "kept label outside the label universe");
      rebuilt.push_back({inf.pair_point(pt, *y), Rat(1)});
    }
    auto h = std::make_shared<Predictor>(bin->reconstruct(rebuilt, sub_bits));
    Predictor p;
    auto cls = c;
    p.eval = [cls, h, inf](PointId x) -> Rat {
      // At most one label fires for a proper or majority reconstruction.
      for (int y = 0; y < inf.num_labels; ++y)
        if ((*h)(inf.pair_point(x, y)) == 1) return cls->labels().value(y);
      return cls->labels().value(0);
    };
    return p;
  };
  return scheme;
}

CompressionScheme reduce_stable(const SubstrateFactory& substrate,
                                std::shared_ptr<const FiniteConceptClass> c) {
  auto inflated = inflate_class(*c);
  auto bin = std::make_shared<CompressionScheme>(substrate(inflated));
  if (!bin->has_flag(kStable))
    fail(ErrorCode::ConstructionError, "stable reduction needs a stable substrate");
  Inflation inf = make_inflation(*c);

  CompressionScheme scheme;
  scheme.name = "reduce-stable[" + bin->name + "]";
  scheme.flags = kStable;
  scheme.size_budget_note = "kept <= f, zero label bits";

  scheme.compress = [c, bin, inf](const LabeledSample& s) -> CompressionOutput {
    LabeledSample sy = inflate_sample(s, *c);
    CompressionOutput sub = bin->compress(sy);
    InflatedGroups groups = group_kept(sub.kept_positions, inf.num_labels);

    CompressionOutput out;
    LabeledSample t;
    for (auto pos : groups.originals) {
      out.kept_positions.push_back(pos);
      out.kept_pairs.push_back(s.pairs[pos]);
      t.pairs.push_back(s.pairs[pos]);
    }
    // Stability contract: re-compressing the re-inflated kept set must
    // reproduce the original compression.
    CompressionOutput redo = bin->compress(inflate_sample(t, *c));
    if (sorted_by_content(redo.kept_pairs) != sorted_by_content(sub.kept_pairs) ||
        redo.bits != sub.bits)
      fail(ErrorCode::AssumptionViolation,
           "substrate stability violated: kappa(T_Y) != kappa(S_Y)");

    out.bits = sub.bits;
    out.audit = {{"f_kept", sub.kept_pairs.size()},
                 {"f_bits", sub.bits.size()},
                 {"f", sub.size()},
                 {"prefix_bits", 0},
                 {"index_bits", 0}};
    return out;
  };

  scheme.reconstruct = [c, bin, inf](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    LabeledSample t;
    t.pairs = pairs;
    CompressionOutput sub = bin->compress(inflate_sample(t, *c));
    if (sub.bits != bits)
      fail(ErrorCode::AssumptionViolation, "substrate bits changed across re-inflation");
    auto h = std::make_shared<Predictor>(bin->reconstruct(sub.kept_pairs, sub.bits));
    Predictor p;
    auto cls = c;
    p.eval = [cls, h, inf](PointId x) -> Rat {
      for (int y = 0; y < inf.num_labels; ++y)
        if ((*h)(inf.pair_point(x, y)) == 1) return cls->labels().value(y);
      return cls->labels().value(0);
    };
    return p;
  };
  return scheme;
}

namespace {

struct TreeOrdering {
  // leq[a][b] over distinct sample points (indexed into pts).
  std::vector<PointId> pts;
  std::vector<std::vector<char>> leq;

  int index_of(PointId p) const {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i] == p) return static_cast<int>(i);
    return -1;
  }
};

// x <= y iff every concept disagreeing with c_0 at x also disagrees at y.
TreeOrdering build_tree_ordering(const FiniteConceptClass& c, const std::vector<PointId>& pts) {
  TreeOrdering t;
  t.pts = pts;
  const int k = static_cast<int>(pts.size());
  t.leq.assign(k, std::vector<char>(k, 1));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      bool ok = true;
      for (int ci = 0; ci < c.num_concepts() && ok; ++ci) {
        bool dis_a = c.at(ci, pts[a]) != c.at(0, pts[a]);
        bool dis_b = c.at(ci, pts[b]) != c.at(0, pts[b]);
        if (dis_a && !dis_b) ok = false;
      }
      t.leq[a][b] = ok ? 1 : 0;
    }
  }
  return t;
}

// Deepest = minimal under the ordering; mutual-leq ties break to the smaller
// point id.
int deepest(const TreeOrdering& t, const std::vector<int>& candidates) {
  int best = candidates.front();
  for (int cand : candidates) {
    if (cand == best) continue;
    if (t.leq[cand][best] && (!t.leq[best][cand] || t.pts[cand] < t.pts[best])) best = cand;
  }
  return best;
}

}  // namespace

CompressionOutput graphdim1_compress_with_stats(const FiniteConceptClass& c,
                                                const LabeledSample& s, GraphDim1Stats* stats) {
  auto realizer = is_realizable(c, s);
  if (!realizer) fail(ErrorCode::Unrealizable, "graph-dim-1 scheme needs a realizable sample");
  const int creal = *realizer;

  std::vector<PointId> pts;
  for (const auto& pr : s.pairs)
    if (std::find(pts.begin(), pts.end(), pr.point) == pts.end()) pts.push_back(pr.point);

  std::vector<int> disagree;
  TreeOrdering order = build_tree_ordering(c, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (c.at(creal, pts[i]) != c.at(0, pts[i])) disagree.push_back(static_cast<int>(i));

  GraphDim1Stats local;
  CompressionOutput out;
  if (disagree.empty()) {
    if (stats) *stats = local;
    return out;  // fully consistent with c_0: empty compression
  }

  auto consistent_count = [&](int pt_index) {
    int n = 0;
    for (int ci = 0; ci < c.num_concepts(); ++ci)
      if (c.at(ci, order.pts[pt_index]) == c.at(creal, order.pts[pt_index])) ++n;
    return n;
  };
  auto consistent_set = [&](int pt_index) {
    std::vector<char> in(c.num_concepts(), 0);
    for (int ci = 0; ci < c.num_concepts(); ++ci)
      if (c.at(ci, order.pts[pt_index]) == c.at(creal, order.pts[pt_index])) in[ci] = 1;
    return in;
  };

  int z = deepest(order, disagree);
  local.iterations = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (order.leq[z][static_cast<int>(i)]) ++local.chain_bound;

  const std::size_t guard = pts.size() + 1;
  while (true) {
    if (local.iterations > guard)
      fail(ErrorCode::SchemeFailure, "graph-dim-1 iteration did not terminate");
    // Ambiguity set: points above z_t whose label is not pinned by the
    // concepts agreeing with the realizer at z_t.
    std::vector<int> ambiguous;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      int pi = static_cast<int>(i);
      if (pi == z || !order.leq[z][pi]) continue;
      std::set<Rat> labels;
      for (int ci = 0; ci < c.num_concepts(); ++ci)
        if (c.at(ci, order.pts[z]) == c.at(creal, order.pts[z])) labels.insert(c.at(ci, pts[i]));
      if (labels.size() > 1) ambiguous.push_back(pi);
    }
    if (ambiguous.empty()) break;
    int znext = deepest(order, ambiguous);
    // The consistent-concept set must shrink strictly at every move.
    auto before = consistent_set(z);
    auto after = consistent_set(znext);
    bool subset = true, strict = false;
    for (int ci = 0; ci < c.num_concepts(); ++ci) {
      if (after[ci] && !before[ci]) subset = false;
      if (before[ci] && !after[ci]) strict = true;
    }
    if (!subset || !strict) local.strict_shrink = false;
    (void)consistent_count;
    z = znext;
    ++local.iterations;
  }

  // First position of z with the realizer's label.
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.pairs[i].point == order.pts[z]) {
      out.kept_positions.push_back(i);
      out.kept_pairs.push_back(s.pairs[i]);
      break;
    }
  }
  if (stats) *stats = local;
  return out;
}

CompressionScheme graphdim1_scheme(std::shared_ptr<const FiniteConceptClass> c) {
  DimensionReport dg = graph_dimension(*c);
  if (dg.value > 1)
    fail(ErrorCode::ConstructionError, "graph dimension exceeds 1");

  CompressionScheme scheme;
  scheme.name = "graph-dim-1";
  scheme.size_budget_note = "<= 1 kept point, zero bits";
  scheme.declared_size_cap = 1;

  scheme.compress = [c](const LabeledSample& s) -> CompressionOutput {
    return graphdim1_compress_with_stats(*c, s, nullptr);
  };

  scheme.reconstruct = [c](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "graph-dim-1 carries no bits");
    if (pairs.empty()) return row_predictor(*c, 0);
    if (pairs.size() != 1) fail(ErrorCode::DecodeError, "graph-dim-1 keeps at most one pair");
    const PointId x = pairs[0].point;
    const Rat y = pairs[0].label;
    Predictor p;
    auto cls = c;
    p.eval = [cls, x, y](PointId z) -> Rat {
      // Unambiguous label among concepts consistent with (x, y), else c_0.
      std::optional<Rat> unique_val;
      bool ambiguous = false;
      for (int ci = 0; ci < cls->num_concepts(); ++ci) {
        if (cls->at(ci, x) != y) continue;
        if (!unique_val) {
          unique_val = cls->at(ci, z);
        } else if (*unique_val != cls->at(ci, z)) {
          ambiguous = true;
          break;
        }
      }
      if (unique_val && !ambiguous) return *unique_val;
      return cls->at(0, z);
    };
    return p;
  };
  return scheme;
}

CompressionScheme piecewise_threshold_inflated_scheme(
    int k, std::shared_ptr<const FiniteConceptClass> piecewise_class) {
  if (k < 1) fail(ErrorCode::ConstructionError, "k must be >= 1");
  Inflation inf = make_inflation(*piecewise_class);

  CompressionScheme scheme;
  scheme.name = "piecewise-threshold-inflated";
  scheme.flags = kStable;
  scheme.size_budget_note = "<= 2k kept points, zero bits";
  scheme.declared_size_cap = static_cast<std::size_t>(2 * k);

  scheme.compress = [piecewise_class, inf](const LabeledSample& s) -> CompressionOutput {
    // Realizability over the inflation of the piecewise class.
    bool realizable = false;
    for (int ci = 0; ci < piecewise_class->num_concepts() && !realizable; ++ci) {
      bool ok = true;
      for (const auto& [pt, label] : s.pairs) {
        PointId x = inf.base_point(pt);
        int y = inf.label_index(pt);
        bool hit = piecewise_class->at(ci, x) == piecewise_class->labels().value(y);
        if (Rat(hit ? 1 : 0) != label) {
          ok = false;
          break;
        }
      }
      realizable = ok;
    }
    if (!realizable)
      fail(ErrorCode::Unrealizable, "sample not realizable by the piecewise class");

    // Leftmost and rightmost positive pair per label value.
    std::map<int, std::pair<std::size_t, std::size_t>> extremes;  // y -> (left pos, right pos)
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.pairs[i].label != 1) continue;
      PointId x = inf.base_point(s.pairs[i].point);
      int y = inf.label_index(s.pairs[i].point);
      auto it = extremes.find(y);
      if (it == extremes.end()) {
        extremes[y] = {i, i};
      } else {
        if (x < inf.base_point(s.pairs[it->second.first].point)) it->second.first = i;
        if (x > inf.base_point(s.pairs[it->second.second].point)) it->second.second = i;
      }
    }
    std::set<std::size_t> picks;
    for (const auto& [y, lr] : extremes) {
      picks.insert(lr.first);
      picks.insert(lr.second);
    }
    CompressionOutput out;
    for (auto pos : picks) {
      out.kept_positions.push_back(pos);
      out.kept_pairs.push_back(s.pairs[pos]);
    }
    return out;
  };

  scheme.reconstruct = [inf](const KeptPairs& pairs, const Bits& bits) -> Predictor {
    if (!bits.empty()) fail(ErrorCode::DecodeError, "piecewise scheme carries no bits");
    auto spans = std::make_shared<std::map<int, std::pair<PointId, PointId>>>();
    for (const auto& [pt, label] : pairs) {
      if (label != 1) fail(ErrorCode::DecodeError, "piecewise scheme keeps positive pairs only");
      PointId x = inf.base_point(pt);
      int y = inf.label_index(pt);
      auto it = spans->find(y);
      if (it == spans->end())
        (*spans)[y] = {x, x};
      else
        it->second = {std::min(it->second.first, x), std::max(it->second.second, x)};
    }
    Predictor p;
    p.eval = [inf, spans](PointId pt) -> Rat {
      PointId x = inf.base_point(pt);
      int y = inf.label_index(pt);
      auto it = spans->find(y);
      if (it == spans->end()) return Rat(0);
      return Rat(it->second.first <= x && x <= it->second.second ? 1 : 0);
    };
    return p;
  };
  return scheme;
}

CompressionScheme agnostic_wrap(const CompressionScheme& realizable_scheme,
                                std::shared_ptr<const FiniteConceptClass> c) {
  auto inner = std::make_shared<CompressionScheme>(realizable_scheme);

  CompressionScheme scheme;
  scheme.name = "agnostic[" + inner->name + "]";
  scheme.flags = inner->flags & ~kStable;
  scheme.size_budget_note = inner->size_budget_note;
  scheme.declared_size_cap = inner->declared_size_cap;
  scheme.relabels = inner->relabels;

  scheme.compress = [c, inner](const LabeledSample& s) -> CompressionOutput {
    if (s.empty()) return inner->compress(s);
    auto [best, best_loss] = erm(*c, s, LossSpec::zero_one());
    LabeledSample correct;
    std::vector<std::size_t> back;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (c->at(best, s.pairs[i].point) == s.pairs[i].label) {
        correct.pairs.push_back(s.pairs[i]);
        back.push_back(i);
      }
    }
    CompressionOutput out = inner->compress(correct);
    for (auto& pos : out.kept_positions) pos = back[pos];
    out.audit["erm_loss"] = rat_to_string(best_loss);
    return out;
  };
  scheme.reconstruct = inner->reconstruct;
  return scheme;
}

}  // namespace scompress
