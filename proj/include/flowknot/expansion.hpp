#pragma once

// Flow expansions: an inverse sequence of wedges of circles with positive
// bonding substitutions, optionally carrying explicit embedded stages. From
// an embedded expansion we build the direct system of complement groups, and
// on top of that the three main analyses: a freeness certificate for every
// stage, the stabilized knot group when the inclusions become verified free
// automorphisms, and the first Cech cohomology of the limit via the
// abelianized system.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowknot/diagram.hpp"
#include "flowknot/errors.hpp"
#include "flowknot/fpgroup.hpp"
#include "flowknot/intmat.hpp"
#include "flowknot/symbolic.hpp"

namespace flowknot::expansion {

// ---------------------------------------------------------------------------
// Expansions

struct FlowExpansion {
  std::vector<int> ranks;                        // circle counts, stage 0 outward
  std::vector<symbolic::Substitution> bondings;  // bondings[i]: stage i+1 letters -> stage i words
  /// Number of trailing bonding maps that repeat forever; 0 means the
  /// recorded data is all there is.
  int tailPeriod = 0;
};

inline void validate(const FlowExpansion& e) {
  if (e.ranks.empty()) throw invalid_input("expansion needs at least one stage rank");
  if (e.ranks.size() != e.bondings.size() + 1)
    throw invalid_input("expansion needs exactly one bonding map between consecutive stages");
  for (int r : e.ranks)
    if (r < 1) throw invalid_input("expansion stage rank must be >= 1");
  for (std::size_t i = 0; i < e.bondings.size(); ++i) {
    if (e.bondings[i].domain().size() != e.ranks[i + 1])
      throw invalid_input("bonding " + std::to_string(i) + " domain does not match the inner stage rank");
    if (e.bondings[i].codomain().size() != e.ranks[i])
      throw invalid_input("bonding " + std::to_string(i) + " codomain does not match the outer stage rank");
  }
  if (e.tailPeriod < 0 || e.tailPeriod > int(e.bondings.size()))
    throw invalid_input("expansion tail period out of range");
  if (e.tailPeriod > 0 && e.ranks[e.ranks.size() - 1 - std::size_t(e.tailPeriod)] != e.ranks.back())
    throw invalid_input("expansion tail cannot repeat: rank mismatch at the wrap");
}

/// Index into the recorded bondings for logical step i, unrolling the
/// periodic tail.
inline std::size_t bonding_index(const FlowExpansion& e, std::size_t i) {
  const std::size_t n = e.bondings.size();
  if (i < n) return i;
  if (e.tailPeriod == 0)
    throw invalid_input("depth " + std::to_string(i + 1) + " exceeds the " + std::to_string(n) +
                        " recorded bonding maps (no periodic tail)");
  const std::size_t start = n - std::size_t(e.tailPeriod);
  return start + (i - start) % std::size_t(e.tailPeriod);
}

inline const symbolic::Substitution& bonding_at(const FlowExpansion& e, std::size_t i) {
  return e.bondings[bonding_index(e, i)];
}

inline int rank_at(const FlowExpansion& e, std::size_t i) {
  if (i < e.ranks.size()) return e.ranks[i];
  return bonding_at(e, i - 1).domain().size();
}

/// An expansion with chosen embeddings. stages[i] realizes bondings[i]; a
/// missing entry means the canonical unknotted embedding, and the periodic
/// tail reuses the stage of the bonding it repeats.
struct EmbeddedExpansion {
  FlowExpansion base;
  std::vector<std::optional<diagram::EmbeddingStage>> stages;
};

/// The canonical unknotted realization of a substitution: one crossing-free
/// arc per inner circle, traces ordered by phase along the circles, so that
/// the trace of outer generator j lists the circles whose images pass through
/// hole j in the order those passes occur along the flow.
inline diagram::EmbeddingStage canonical_stage(const symbolic::Substitution& sub) {
  const int inner = sub.domain().size();
  const int outer = sub.codomain().size();
  diagram::EmbeddingStage st;
  st.name = "canonical";
  st.diagram.arcs = inner;
  for (int a = 0; a < inner; ++a) {
    st.diagram.arcNames.push_back("c" + std::to_string(a));
    st.diagram.loops.push_back({a});
    st.diagram.wedge.incoming.push_back(a);
    st.diagram.wedge.outgoing.push_back(a);
  }
  for (int j = 0; j < outer; ++j) {
    struct Pass {
      std::size_t pos, len;
      int circle;
    };
    std::vector<Pass> passes;
    for (int l = 0; l < inner; ++l) {
      const symbolic::Word& im = sub.image(symbolic::Letter(l));
      for (std::size_t t = 0; t < im.size(); ++t)
        if (int(im[t]) == j) passes.push_back({t, im.size(), l});
    }
    std::sort(passes.begin(), passes.end(), [](const Pass& a, const Pass& b) {
      const auto lhs = (unsigned long long)a.pos * b.len;
      const auto rhs = (unsigned long long)b.pos * a.len;
      if (lhs != rhs) return lhs < rhs;
      return a.circle < b.circle;
    });
    diagram::LoopTrace tr;
    for (const Pass& p : passes) tr.push_back({p.circle, 1});
    st.traces.push_back(tr);
  }
  st.bonding = sub;
  diagram::validate(st);
  return st;
}

inline void validate(const EmbeddedExpansion& e) {
  validate(e.base);
  if (e.stages.size() > e.base.bondings.size())
    throw invalid_input("more embedded stages than bonding maps");
  for (std::size_t i = 0; i < e.stages.size(); ++i) {
    if (!e.stages[i]) continue;
    const diagram::EmbeddingStage& st = *e.stages[i];
    diagram::validate(st);
    const symbolic::Substitution& b = e.base.bondings[i];
    if (int(st.diagram.loops.size()) != b.domain().size())
      throw invalid_input("stage " + std::to_string(i) + " loop count does not match its bonding domain");
    if (int(st.traces.size()) != b.codomain().size())
      throw invalid_input("stage " + std::to_string(i) + " trace count does not match its bonding codomain");
    if (st.bonding && !(*st.bonding == b))
      throw invalid_input("stage " + std::to_string(i) + " declares a different substitution than its bonding");
  }
}

inline diagram::EmbeddingStage stage_at(const EmbeddedExpansion& e, std::size_t i) {
  const std::size_t idx = bonding_index(e.base, i);
  if (idx < e.stages.size() && e.stages[idx]) return *e.stages[idx];
  return canonical_stage(bonding_at(e.base, i));
}

// ---------------------------------------------------------------------------
// The direct system of complement groups

/// Complement-group system to `depth` bonding steps: P_0 is free on the
/// outermost circles (depth 0 gives just that group), P_{i+1} is the
/// Wirtinger presentation of stage i, and each map sends a generator to the
/// trace word of its loop. Maps into relator-bearing targets are recorded
/// unverified.
inline fpgroup::DirectSystem knot_group_system(const EmbeddedExpansion& e, int depth) {
  validate(e);
  if (depth < 0) throw invalid_input("system depth must be >= 0");
  const std::size_t d = std::size_t(depth);
  fpgroup::DirectSystem sys;
  std::vector<std::string> baseNames;
  for (int g = 0; g < rank_at(e.base, 0); ++g) baseNames.push_back("t" + std::to_string(g));
  sys.groups.push_back(fpgroup::free_group(rank_at(e.base, 0), baseNames));
  std::vector<diagram::EmbeddingStage> stages;
  for (std::size_t i = 0; i < d; ++i) {
    stages.push_back(stage_at(e, i));
    sys.groups.push_back(diagram::wirtinger(stages.back().diagram));
  }
  for (std::size_t i = 0; i < d; ++i) {
    const diagram::EmbeddingStage& st = stages[i];
    std::vector<fpgroup::GroupWord> images;
    if (i == 0) {
      for (const diagram::LoopTrace& t : st.traces) images.push_back(diagram::trace_word(t));
    } else {
      // Arc generators of the outer diagram map to the trace of their loop.
      const std::vector<int> owner = diagram::loop_of_arc(stages[i - 1].diagram);
      for (int a = 0; a < stages[i - 1].diagram.arcs; ++a)
        images.push_back(diagram::trace_word(st.traces[std::size_t(owner[std::size_t(a)])]));
    }
    fpgroup::GroupMorphism m = fpgroup::make_morphism(sys.groups[i], sys.groups[i + 1], std::move(images));
    sys.maps.push_back(std::move(m));
  }
  fpgroup::validate(sys);
  return sys;
}

// ---------------------------------------------------------------------------
// Freeness certificate

struct UnknottedCertificate {
  enum class Verdict { certifiedAllFree, notFree, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  int stage = -1;      // first offending / undecided stage
  std::string reason;
};

/// Try to certify every group in the system free (simplification reaches an
/// empty relator set), or disprove freeness at some stage via abelian torsion
/// or a homomorphism count differing from the free-group count. Neither
/// succeeding leaves the verdict inconclusive — never a false certificate.
inline UnknottedCertificate unknotted_certificate(const fpgroup::DirectSystem& sys, int tietzeBudget = 1000) {
  using fpgroup::HomTarget;
  for (std::size_t i = 0; i < sys.groups.size(); ++i) {
    const fpgroup::TietzeResult t = fpgroup::tietze_simplify(sys.groups[i], tietzeBudget);
    if (t.presentation.is_free()) continue;
    const fpgroup::AbelianGroup ab = fpgroup::abelianize(t.presentation);
    if (!ab.torsion.empty())
      return {UnknottedCertificate::Verdict::notFree, int(i),
              "stage " + std::to_string(i) + " has torsion " + ab.str() + " in first homology"};
    if (t.presentation.rank <= 6) {
      const long long actual = fpgroup::count_homs(t.presentation, HomTarget::symmetric(3));
      long long expected = 1;
      for (long long k = 0; k < ab.freeRank; ++k) expected *= 6;
      if (actual != expected)
        return {UnknottedCertificate::Verdict::notFree, int(i),
                "stage " + std::to_string(i) + " admits " + std::to_string(actual) +
                    " maps to S3 but a free group of rank " + std::to_string(ab.freeRank) + " admits " +
                    std::to_string(expected)};
    }
    return {UnknottedCertificate::Verdict::inconclusive, int(i),
            "stage " + std::to_string(i) + " did not simplify to a free presentation"};
  }
  return {UnknottedCertificate::Verdict::certifiedAllFree, -1,
          "all " + std::to_string(sys.groups.size()) + " stage groups simplify to free presentations"};
}

// ---------------------------------------------------------------------------
// Stable knot group

struct StableKnotGroup {
  std::optional<std::size_t> stage;                    // first stage from which all maps verify
  std::optional<fpgroup::GroupPresentation> group;     // simplified presentation at that stage
  std::vector<bool> mapIsFreeAutomorphism;             // one entry per map in the system
  std::string note;
};

namespace detail {

/// Rewrite map i of the system through Tietze simplification of both ends;
/// returns the images of the simplified source generators over the simplified
/// target generators, or nothing if either end keeps relators.
inline std::optional<std::pair<int, std::vector<fpgroup::GroupWord>>> simplified_map(
    const fpgroup::DirectSystem& sys, std::size_t i, int tietzeBudget) {
  const fpgroup::TietzeResult src = fpgroup::tietze_simplify(sys.groups[i], tietzeBudget);
  const fpgroup::TietzeResult tgt = fpgroup::tietze_simplify(sys.groups[i + 1], tietzeBudget);
  if (!src.presentation.is_free() || !tgt.presentation.is_free()) return std::nullopt;
  std::vector<fpgroup::GroupWord> images;
  for (int g : src.keptOriginal)
    images.push_back(fpgroup::apply_images(tgt.rewrite, sys.maps[i].images[std::size_t(g)]));
  return std::make_pair(tgt.presentation.rank, std::move(images));
}

}  // namespace detail

/// Find the first stage N such that every later map in the system, rewritten
/// through simplification, is a verified automorphism of a free group; the
/// knot group is then (isomorphic to) the stage-N group. Requires at least
/// one verified map beyond N, and reports none when verification fails.
inline StableKnotGroup stable_knot_group(const fpgroup::DirectSystem& sys, int tietzeBudget = 1000) {
  StableKnotGroup out;
  const std::size_t n = sys.maps.size();
  out.mapIsFreeAutomorphism.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = detail::simplified_map(sys, i, tietzeBudget);
    if (!m) continue;
    const auto& [targetRank, images] = *m;
    if (int(images.size()) != targetRank) continue;
    out.mapIsFreeAutomorphism[i] = fpgroup::is_free_automorphism(targetRank, images);
  }
  std::size_t stage = n;
  while (stage > 0 && out.mapIsFreeAutomorphism[stage - 1]) --stage;
  if (stage == n) {
    out.note = "no terminal run of verified free automorphisms among the " + std::to_string(n) + " maps";
    return out;
  }
  out.stage = stage;
  out.group = fpgroup::tietze_simplify(sys.groups[stage], tietzeBudget).presentation;
  out.note = "maps from stage " + std::to_string(stage) + " on are verified free automorphisms";
  return out;
}

// ---------------------------------------------------------------------------
// First Cech cohomology of the limit

struct CechH1 {
  bool rankOne = false;
  fpgroup::Supernatural colimit;       // rank-one case: the supernatural invariant
  std::vector<long long> windings;     // rank-one case: winding of each recorded step
  std::vector<IntMatrix> maps;         // abelianized inclusion maps, to the requested depth
  std::vector<bigint> dets;            // determinants of the square maps
  long long stableRank = 0;            // rank of the composite over the requested depth
  std::string note;
};

/// H1 of the complement system (equivalently, first Cech cohomology of the
/// limit): the map at each step is the transpose of the bonding's transition
/// matrix, sampled for `depth` steps (the declared periodic tail unrolls as
/// needed). Rank-one systems get the supernatural invariant of the sampled
/// windings, with tail primes flagged infinite once the sample covers a full
/// tail block; higher ranks report the step maps, their determinants, and the
/// rank of the composite.
inline CechH1 cech_h1(const FlowExpansion& e, int depth) {
  validate(e);
  if (depth < 0) throw invalid_input("cech depth must be >= 0");
  const std::size_t d = std::size_t(depth);
  CechH1 out;
  out.rankOne = std::all_of(e.ranks.begin(), e.ranks.end(), [](int r) { return r == 1; });
  for (std::size_t i = 0; i < d; ++i) {
    const IntMatrix m = transition_matrix(bonding_at(e, i)).transpose();
    if (m.rows() == m.cols()) out.dets.push_back(determinant(m));
    out.maps.push_back(m);
  }
  if (out.maps.empty()) {
    out.stableRank = rank_at(e, 0);
  } else {
    IntMatrix composite = out.maps.front();
    for (std::size_t i = 1; i < d; ++i) composite = out.maps[i] * composite;
    out.stableRank = (long long)matrix_rank(composite);
  }
  if (out.rankOne) {
    for (std::size_t i = 0; i < d; ++i)
      out.windings.push_back((long long)bonding_at(e, i).image(0).size());
    const int tail = (e.tailPeriod > 0 && d >= e.bondings.size()) ? e.tailPeriod : 0;
    out.colimit = fpgroup::colimit_rank1(out.windings, tail);
    out.note = "rank-one limit " + out.colimit.group_str();
  } else {
    out.note = "rank " + std::to_string(out.stableRank) + " after " + std::to_string(d) + " steps";
  }
  return out;
}

/// Two embedded stages induce the same map on first homology exactly when
/// their abelianized inclusion matrices agree.
inline bool embedding_independent(const diagram::EmbeddingStage& a, const diagram::EmbeddingStage& b) {
  return diagram::abelianized_inclusion(a) == diagram::abelianized_inclusion(b);
}

// ---------------------------------------------------------------------------
// Built-in expansions

inline std::vector<std::string> builtin_expansion_names() {
  return {"dyadic_unknotted", "dyadic_trefoil", "fibonacci_unknotted", "fibonacci_trefoil",
          "thue_morse_simplified"};
}

/// The five bundled expansions: each repeats a single embedded stage forever
/// (tail period 1).
inline EmbeddedExpansion builtin_expansion(const std::string& name) {
  const diagram::EmbeddingStage st = diagram::builtin_fixture(name);
  EmbeddedExpansion e;
  e.base.ranks = {int(st.traces.size()), int(st.diagram.loops.size())};
  e.base.bondings = {*st.bonding};
  e.base.tailPeriod = 1;
  e.stages = {st};
  validate(e);
  return e;
}

/// The expansion with bonding maps sigma_{n_1}, sigma_{n_2}, ... for the given
/// parameters, the last repeating forever, all canonically embedded.
inline EmbeddedExpansion sturmian_expansion(const symbolic::SturmianParams& params) {
  EmbeddedExpansion e;
  e.base.ranks.assign(params.entries.size() + 1, 2);
  for (int n : params.entries) e.base.bondings.push_back(symbolic::sturmian_substitution(n));
  e.base.tailPeriod = 1;
  validate(e);
  return e;
}

}  // namespace flowknot::expansion
