#pragma once

// Wedge diagrams: planar diagrams of a wedge of circles, with arcs split at
// crossings and at the wedge point. From a diagram we read off a Wirtinger
// presentation of the complement and, for an embedded stage, the inclusion of
// the ambient wedge group as trace words over the arcs.
//
// Conventions (pinned by the built-in trefoil fixtures and echoed in every
// report):
//   * crossing of sign s: underOut = over^s . underIn . over^-s, recorded as
//     the pair (underOut . over^s, over^s . underIn);
//   * wedge relator: product of incoming arcs = product of outgoing arcs,
//     in loop order.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowknot/errors.hpp"
#include "flowknot/fpgroup.hpp"
#include "flowknot/intmat.hpp"
#include "flowknot/symbolic.hpp"

namespace flowknot::diagram {

struct Crossing {
  int over = 0;
  int underIn = 0;
  int underOut = 0;
  int sign = 1;  // +1 or -1
};

struct Wedge {
  std::vector<int> incoming;  // incoming[i] terminates loop i at the wedge point
  std::vector<int> outgoing;  // outgoing[i] starts loop i
};

struct TraceStep {
  int arc = 0;
  int exp = 1;  // +1 or -1
};
using LoopTrace = std::vector<TraceStep>;

struct WedgeDiagram {
  int arcs = 0;
  std::vector<std::string> arcNames;       // optional; defaults to x0, x1, ...
  std::vector<std::vector<int>> loops;     // partition of the arcs into circles
  std::vector<Crossing> crossings;
  Wedge wedge;
};

inline std::vector<std::string> arc_names(const WedgeDiagram& d) {
  if (!d.arcNames.empty()) return d.arcNames;
  std::vector<std::string> names;
  for (int a = 0; a < d.arcs; ++a) names.push_back("x" + std::to_string(a));
  return names;
}

/// Loop index of each arc; the diagram must already be validated.
inline std::vector<int> loop_of_arc(const WedgeDiagram& d) {
  std::vector<int> owner(std::size_t(d.arcs), -1);
  for (std::size_t li = 0; li < d.loops.size(); ++li)
    for (int a : d.loops[li]) owner[std::size_t(a)] = int(li);
  return owner;
}

/// Check every structural invariant, throwing invalid_input that names the
/// first violated one.
inline void validate(const WedgeDiagram& d) {
  if (d.arcs < 1) throw invalid_input("diagram invariant: at least one arc required");
  if (!d.arcNames.empty() && int(d.arcNames.size()) != d.arcs)
    throw invalid_input("diagram invariant: arc name count must equal arc count");
  if (d.loops.empty()) throw invalid_input("diagram invariant: at least one loop required");

  std::vector<int> owner(std::size_t(d.arcs), -1);
  for (std::size_t li = 0; li < d.loops.size(); ++li) {
    if (d.loops[li].empty()) throw invalid_input("diagram invariant: loop " + std::to_string(li) + " is empty");
    for (int a : d.loops[li]) {
      if (a < 0 || a >= d.arcs)
        throw invalid_input("diagram invariant: loop " + std::to_string(li) + " lists arc out of range");
      if (owner[std::size_t(a)] != -1)
        throw invalid_input("diagram invariant: arc " + std::to_string(a) + " appears in two loops");
      owner[std::size_t(a)] = int(li);
    }
  }
  for (int a = 0; a < d.arcs; ++a)
    if (owner[std::size_t(a)] == -1)
      throw invalid_input("diagram invariant: arc " + std::to_string(a) + " belongs to no loop");

  for (std::size_t ci = 0; ci < d.crossings.size(); ++ci) {
    const Crossing& c = d.crossings[ci];
    const std::string tag = "diagram invariant: crossing " + std::to_string(ci);
    for (int a : {c.over, c.underIn, c.underOut})
      if (a < 0 || a >= d.arcs) throw invalid_input(tag + " references arc out of range");
    if (c.sign != 1 && c.sign != -1) throw invalid_input(tag + " has sign other than +1/-1");
    if (owner[std::size_t(c.underIn)] != owner[std::size_t(c.underOut)])
      throw invalid_input(tag + " joins under-arcs from different loops");
  }

  if (d.wedge.incoming.size() != d.loops.size() || d.wedge.outgoing.size() != d.loops.size())
    throw invalid_input("diagram invariant: wedge needs one incoming and one outgoing arc per loop");
  for (std::size_t li = 0; li < d.loops.size(); ++li) {
    for (int a : {d.wedge.incoming[li], d.wedge.outgoing[li]}) {
      if (a < 0 || a >= d.arcs)
        throw invalid_input("diagram invariant: wedge references arc out of range");
      if (owner[std::size_t(a)] != int(li))
        throw invalid_input("diagram invariant: wedge arc of loop " + std::to_string(li) +
                            " lies on a different loop");
    }
  }

  // Each arc terminates exactly once (crossing under-entry or wedge incoming)
  // and starts exactly once (crossing under-exit or wedge outgoing).
  std::vector<int> ends(std::size_t(d.arcs), 0), starts(std::size_t(d.arcs), 0);
  for (const Crossing& c : d.crossings) {
    ++ends[std::size_t(c.underIn)];
    ++starts[std::size_t(c.underOut)];
  }
  for (int a : d.wedge.incoming) ++ends[std::size_t(a)];
  for (int a : d.wedge.outgoing) ++starts[std::size_t(a)];
  for (int a = 0; a < d.arcs; ++a) {
    if (ends[std::size_t(a)] != 1)
      throw invalid_input("diagram invariant: arc " + std::to_string(a) + " must terminate exactly once (has " +
                          std::to_string(ends[std::size_t(a)]) + ")");
    if (starts[std::size_t(a)] != 1)
      throw invalid_input("diagram invariant: arc " + std::to_string(a) + " must start exactly once (has " +
                          std::to_string(starts[std::size_t(a)]) + ")");
  }
}

/// A relation kept as two words asserted equal; exported as left * right^-1.
struct RelatorPair {
  fpgroup::GroupWord left, right;
};

inline std::vector<RelatorPair> wirtinger_pairs(const WedgeDiagram& d) {
  validate(d);
  using fpgroup::GroupWord;
  std::vector<RelatorPair> pairs;
  for (const Crossing& c : d.crossings) {
    const GroupWord over = GroupWord::generator(c.over);
    const GroupWord in = GroupWord::generator(c.underIn);
    const GroupWord out = GroupWord::generator(c.underOut);
    if (c.sign > 0)
      pairs.push_back({out * over, over * in});
    else
      pairs.push_back({over * out, in * over});
  }
  GroupWord in, out;
  for (int a : d.wedge.incoming) in.append(GroupWord::generator(a));
  for (int a : d.wedge.outgoing) out.append(GroupWord::generator(a));
  pairs.push_back({in, out});
  return pairs;
}

/// Wirtinger presentation of the diagram complement: one generator per arc,
/// one relator per crossing plus the wedge relator. Relators that reduce to
/// the empty word (e.g. the wedge relator of a crossing-free stage) are
/// dropped so such stages present honestly free groups.
inline fpgroup::GroupPresentation wirtinger(const WedgeDiagram& d) {
  std::vector<fpgroup::GroupWord> relators;
  for (const RelatorPair& pr : wirtinger_pairs(d)) {
    fpgroup::GroupWord r = pr.left * pr.right.inverse();
    if (!r.empty()) relators.push_back(std::move(r));
  }
  return fpgroup::GroupPresentation(d.arcs, std::move(relators), arc_names(d));
}

inline fpgroup::GroupWord trace_word(const LoopTrace& t) {
  std::vector<std::pair<int, int>> steps;
  steps.reserve(t.size());
  for (const TraceStep& s : t) {
    if (s.exp != 1 && s.exp != -1) throw invalid_input("trace step exponent must be +1/-1");
    steps.emplace_back(s.arc, s.exp);
  }
  return fpgroup::GroupWord::from_steps(steps);
}

/// One stage of an embedding: an inner wedge diagram drawn inside an outer
/// wedge whose generators travel the recorded traces. `bonding` is the
/// positive substitution this stage realizes (inner loop -> word over outer
/// generators), when known.
struct EmbeddingStage {
  std::string name;  // fixture name or "canonical"
  WedgeDiagram diagram;
  std::vector<LoopTrace> traces;  // one per outer generator
  std::optional<symbolic::Substitution> bonding;
};

inline void validate(const EmbeddingStage& st) {
  validate(st.diagram);
  if (st.traces.empty()) throw invalid_input("stage invariant: at least one trace required");
  for (const LoopTrace& t : st.traces)
    for (const TraceStep& s : t) {
      if (s.arc < 0 || s.arc >= st.diagram.arcs)
        throw invalid_input("stage invariant: trace references arc out of range");
      if (s.exp != 1 && s.exp != -1)
        throw invalid_input("stage invariant: trace exponent must be +1/-1");
    }
  if (st.bonding) {
    if (st.bonding->domain().size() != int(st.diagram.loops.size()))
      throw invalid_input("stage invariant: bonding domain must match the loop count");
    if (st.bonding->codomain().size() != int(st.traces.size()))
      throw invalid_input("stage invariant: bonding codomain must match the trace count");
  }
}

/// Inclusion of the outer wedge group (free on one generator per trace) into
/// the complement of the inner diagram.
inline fpgroup::GroupMorphism inclusion_morphism(const EmbeddingStage& st) {
  validate(st);
  std::vector<fpgroup::GroupWord> images;
  images.reserve(st.traces.size());
  for (const LoopTrace& t : st.traces) images.push_back(trace_word(t));
  std::vector<std::string> outerNames;
  for (std::size_t i = 0; i < st.traces.size(); ++i) outerNames.push_back("t" + std::to_string(i));
  return fpgroup::make_morphism(fpgroup::free_group(int(st.traces.size()), outerNames), wirtinger(st.diagram),
                                std::move(images));
}

/// First homology of the inclusion, written in the loop basis: entry (i, j)
/// is the signed number of times trace j runs along arcs of loop i.
inline IntMatrix abelianized_inclusion(const EmbeddingStage& st) {
  validate(st);
  const std::vector<int> owner = loop_of_arc(st.diagram);
  IntMatrix m(st.diagram.loops.size(), st.traces.size());
  for (std::size_t j = 0; j < st.traces.size(); ++j)
    for (const TraceStep& s : st.traces[j])
      m.at(std::size_t(owner[std::size_t(s.arc)]), j) += s.exp;
  return m;
}

/// The stage matches a substitution when its abelianized inclusion equals the
/// transpose of the substitution's transition matrix.
inline bool duality_check(const EmbeddingStage& st, const symbolic::Substitution& sub) {
  return abelianized_inclusion(st) == transition_matrix(sub).transpose();
}

// ---------------------------------------------------------------------------
// Built-in fixtures

inline std::vector<std::string> fixture_names() {
  return {"dyadic_unknotted", "dyadic_trefoil", "fibonacci_unknotted", "fibonacci_trefoil",
          "thue_morse_simplified"};
}

inline EmbeddingStage builtin_fixture(const std::string& name) {
  using symbolic::Substitution;
  using symbolic::Word;
  EmbeddingStage st;
  st.name = name;
  if (name == "dyadic_unknotted") {
    st.diagram = {2, {"a", "a'"}, {{0, 1}}, {{0, 0, 1, 1}}, {{1}, {0}}};
    st.traces = {{{0, 1}, {1, 1}}};
    st.bonding = Substitution::square(1, {Word{0, 0}});
  } else if (name == "dyadic_trefoil") {
    st.diagram = {4,
                  {"a", "b", "c", "a'"},
                  {{0, 1, 2, 3}},
                  {{2, 0, 1, 1}, {0, 1, 2, 1}, {1, 2, 3, 1}},
                  {{3}, {0}}};
    st.traces = {{{0, 1}, {1, 1}}};
    st.bonding = Substitution::square(1, {Word{0, 0}});
  } else if (name == "fibonacci_unknotted") {
    st.diagram = {3, {"a2", "a2'", "b2"}, {{0, 1}, {2}}, {{0, 0, 1, 1}}, {{1, 2}, {0, 2}}};
    st.traces = {{{0, 1}, {1, 1}, {2, 1}}, {{1, 1}, {2, 1}}};
    st.bonding = Substitution::square(2, {Word{0, 0, 1}, Word{0, 1}});
  } else if (name == "fibonacci_trefoil") {
    st.diagram = {5,
                  {"w", "x", "y", "z", "b"},
                  {{0, 1, 2, 3}, {4}},
                  {{2, 0, 1, 1}, {3, 1, 2, 1}, {1, 2, 3, 1}},
                  {{3, 4}, {0, 4}}};
    st.traces = {{{2, 1}, {0, 1}}, {{3, 1}, {4, 1}}};
    st.bonding = Substitution::square(2, {Word{0, 0, 1}, Word{1}});
  } else if (name == "thue_morse_simplified") {
    st.diagram = {4,
                  {"a", "b", "b'", "b''"},
                  {{0}, {1, 2, 3}},
                  {{0, 1, 2, -1}, {0, 2, 3, 1}},
                  {{0, 3}, {0, 1}}};
    st.traces = {{{0, 1}, {2, 1}}, {{1, 1}, {0, 1}}};
    st.bonding = Substitution::square(2, {Word{0, 1}, Word{1, 0}});
  } else {
    throw invalid_input("unknown fixture: " + name);
  }
  validate(st);
  return st;
}

}  // namespace flowknot::diagram
