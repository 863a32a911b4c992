#pragma once

// JSON (de)serialization for every object the command-line tool reads or
// writes. Parsing is permissive about word spellings (digit strings or
// integer arrays); emission is deterministic: ordered_json throughout, words
// as digit strings for alphabets up to ten letters and arrays beyond.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flowknot/diagram.hpp"
#include "flowknot/errors.hpp"
#include "flowknot/expansion.hpp"
#include "flowknot/fpgroup.hpp"
#include "flowknot/intmat.hpp"
#include "flowknot/symbolic.hpp"

namespace flowknot::serial {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Words and substitutions

inline symbolic::Word parse_word(const json& j, const char* what) {
  symbolic::Word w;
  if (j.is_string()) {
    try {
      w = symbolic::word_from_digits(j.get<std::string>());
    } catch (const invalid_input& e) {
      throw invalid_input(std::string(what) + ": " + e.what());
    }
  } else if (j.is_array()) {
    for (const json& x : j) {
      if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() > 255)
        throw invalid_input(std::string(what) + ": word entries must be integers in 0..255");
      w.push_back(symbolic::Letter(x.get<long long>()));
    }
  } else {
    throw invalid_input(std::string(what) + ": a word must be a digit string or an integer array");
  }
  return w;
}

inline json word_json(const symbolic::Word& w, int alphabet) {
  if (alphabet <= 10) return symbolic::word_str(w);
  json arr = json::array();
  for (symbolic::Letter x : w) arr.push_back(int(x));
  return arr;
}

/// {"alphabet": n, "images": [...]} for square substitutions, or
/// {"domain": d, "codomain": c, "images": [...]} in general.
inline symbolic::Substitution parse_substitution(const json& j) {
  if (!j.is_object() || !j.contains("images") || !j["images"].is_array())
    throw invalid_input("substitution: expected an object with an \"images\" array");
  std::vector<symbolic::Word> images;
  for (const json& im : j["images"]) images.push_back(parse_word(im, "substitution image"));
  if (j.contains("alphabet")) {
    if (!j["alphabet"].is_number_integer()) throw invalid_input("substitution: \"alphabet\" must be an integer");
    const int n = j["alphabet"].get<int>();
    return symbolic::Substitution::square(n, std::move(images));
  }
  if (j.contains("domain") && j.contains("codomain"))
    return symbolic::Substitution(symbolic::Alphabet(j["domain"].get<int>()),
                                  symbolic::Alphabet(j["codomain"].get<int>()), std::move(images));
  throw invalid_input("substitution: needs \"alphabet\" (square) or \"domain\"/\"codomain\"");
}

inline json substitution_json(const symbolic::Substitution& s) {
  json j;
  if (s.is_square())
    j["alphabet"] = s.domain().size();
  else {
    j["domain"] = s.domain().size();
    j["codomain"] = s.codomain().size();
  }
  json images = json::array();
  for (const symbolic::Word& im : s.images()) images.push_back(word_json(im, s.codomain().size()));
  j["images"] = images;
  return j;
}

// ---------------------------------------------------------------------------
// Group words and presentations

/// A group word is a list of [generator, exponent] steps.
inline fpgroup::GroupWord parse_group_word(const json& j, const char* what) {
  if (!j.is_array()) throw invalid_input(std::string(what) + ": expected an array of [generator, exponent] steps");
  std::vector<std::pair<int, int>> steps;
  for (const json& s : j) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      throw invalid_input(std::string(what) + ": each step must be a [generator, exponent] pair");
    steps.emplace_back(s[0].get<int>(), s[1].get<int>());
  }
  try {
    return fpgroup::GroupWord::from_steps(steps);
  } catch (const invalid_input& e) {
    throw invalid_input(std::string(what) + ": " + e.what());
  }
}

inline json group_word_json(const fpgroup::GroupWord& w) {
  json steps = json::array();
  const auto& ls = w.letters();
  std::size_t i = 0;
  while (i < ls.size()) {
    std::size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    steps.push_back(json::array({std::abs(ls[i]) - 1, (ls[i] > 0 ? 1 : -1) * int(j - i)}));
    i = j;
  }
  return steps;
}

inline fpgroup::GroupPresentation parse_presentation(const json& j) {
  if (!j.is_object() || !j.contains("rank") || !j["rank"].is_number_integer())
    throw invalid_input("presentation: expected an object with an integer \"rank\"");
  std::vector<fpgroup::GroupWord> relators;
  if (j.contains("relators"))
    for (const json& r : j["relators"]) relators.push_back(parse_group_word(r, "relator"));
  std::vector<std::string> names;
  if (j.contains("names"))
    for (const json& n : j["names"]) {
      if (!n.is_string()) throw invalid_input("presentation: names must be strings");
      names.push_back(n.get<std::string>());
    }
  return fpgroup::GroupPresentation(j["rank"].get<int>(), std::move(relators), std::move(names));
}

inline json presentation_json(const fpgroup::GroupPresentation& p) {
  json j;
  j["rank"] = p.rank;
  j["names"] = p.names;
  json rel = json::array();
  for (const fpgroup::GroupWord& r : p.relators) rel.push_back(group_word_json(r));
  j["relators"] = rel;
  j["display"] = p.str();
  return j;
}

inline json abelian_json(const fpgroup::AbelianGroup& a) {
  json j;
  j["freeRank"] = a.freeRank;
  json tor = json::array();
  for (const bigint& d : a.torsion) tor.push_back(d.str());
  j["torsion"] = tor;
  j["display"] = a.str();
  return j;
}

inline json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const bigint& v = m.at(i, j);
      // Matrix entries in this library are word counts; they fit easily.
      row.push_back((long long)v.convert_to<long long>());
    }
    rows.push_back(row);
  }
  return rows;
}

inline json supernatural_json(const fpgroup::Supernatural& s) {
  json primes = json::object();
  for (const auto& [p, m] : s.primes)
    primes[std::to_string(p)] = m ? json(*m) : json("inf");
  json j;
  j["primes"] = primes;
  j["depth"] = s.depth;
  j["display"] = s.group_str();
  return j;
}

// ---------------------------------------------------------------------------
// Diagrams and stages

inline diagram::EmbeddingStage parse_stage(const json& j) {
  if (!j.is_object()) throw invalid_input("stage: expected an object");
  diagram::EmbeddingStage st;
  st.name = j.value("name", std::string("stage"));
  if (!j.contains("arcs") || !j["arcs"].is_number_integer())
    throw invalid_input("stage: expected an integer \"arcs\" count");
  st.diagram.arcs = j["arcs"].get<int>();
  if (j.contains("names"))
    for (const json& n : j["names"]) st.diagram.arcNames.push_back(n.get<std::string>());
  if (!j.contains("loops")) throw invalid_input("stage: missing \"loops\"");
  for (const json& loop : j["loops"]) {
    std::vector<int> l;
    for (const json& a : loop) l.push_back(a.get<int>());
    st.diagram.loops.push_back(std::move(l));
  }
  if (j.contains("crossings"))
    for (const json& c : j["crossings"]) {
      if (!c.is_object()) throw invalid_input("stage: crossings must be objects");
      diagram::Crossing cr;
      cr.over = c.value("over", -1);
      cr.underIn = c.value("underIn", -1);
      cr.underOut = c.value("underOut", -1);
      cr.sign = c.value("sign", 0);
      st.diagram.crossings.push_back(cr);
    }
  if (!j.contains("wedge") || !j["wedge"].is_object() || !j["wedge"].contains("in") ||
      !j["wedge"].contains("out"))
    throw invalid_input("stage: missing \"wedge\" with \"in\"/\"out\" arc lists");
  for (const json& a : j["wedge"]["in"]) st.diagram.wedge.incoming.push_back(a.get<int>());
  for (const json& a : j["wedge"]["out"]) st.diagram.wedge.outgoing.push_back(a.get<int>());
  if (!j.contains("traces")) throw invalid_input("stage: missing \"traces\"");
  for (const json& t : j["traces"]) {
    diagram::LoopTrace tr;
    for (const json& s : t) {
      if (!s.is_array() || s.size() != 2)
        throw invalid_input("stage: each trace step must be an [arc, exponent] pair");
      tr.push_back({s[0].get<int>(), s[1].get<int>()});
    }
    st.traces.push_back(std::move(tr));
  }
  if (j.contains("bonding")) st.bonding = parse_substitution(j["bonding"]);
  diagram::validate(st);
  return st;
}

inline json stage_json(const diagram::EmbeddingStage& st) {
  json j;
  j["name"] = st.name;
  j["arcs"] = st.diagram.arcs;
  j["names"] = diagram::arc_names(st.diagram);
  j["loops"] = st.diagram.loops;
  json crs = json::array();
  for (const diagram::Crossing& c : st.diagram.crossings) {
    json cj;
    cj["over"] = c.over;
    cj["underIn"] = c.underIn;
    cj["underOut"] = c.underOut;
    cj["sign"] = c.sign;
    crs.push_back(cj);
  }
  j["crossings"] = crs;
  j["wedge"] = {{"in", st.diagram.wedge.incoming}, {"out", st.diagram.wedge.outgoing}};
  json traces = json::array();
  for (const diagram::LoopTrace& t : st.traces) {
    json tr = json::array();
    for (const diagram::TraceStep& s : t) tr.push_back(json::array({s.arc, s.exp}));
    traces.push_back(tr);
  }
  j["traces"] = traces;
  if (st.bonding) j["bonding"] = substitution_json(*st.bonding);
  return j;
}

// ---------------------------------------------------------------------------
// Expansions

/// {"ranks": [...], "bondings": [{"images": [...]}, ...], "tail_period": p,
///  "stages": [name | stage object | null, ...]}
inline expansion::EmbeddedExpansion parse_expansion(const json& j) {
  if (!j.is_object() || !j.contains("ranks") || !j["ranks"].is_array())
    throw invalid_input("expansion: expected an object with a \"ranks\" array");
  expansion::EmbeddedExpansion e;
  for (const json& r : j["ranks"]) {
    if (!r.is_number_integer()) throw invalid_input("expansion: ranks must be integers");
    e.base.ranks.push_back(r.get<int>());
  }
  if (!j.contains("bondings") || !j["bondings"].is_array())
    throw invalid_input("expansion: missing \"bondings\" array");
  const auto& ranks = e.base.ranks;
  std::size_t i = 0;
  for (const json& b : j["bondings"]) {
    if (i + 1 >= ranks.size()) throw invalid_input("expansion: more bondings than rank gaps");
    if (!b.is_object() || !b.contains("images"))
      throw invalid_input("expansion: each bonding needs an \"images\" array");
    std::vector<symbolic::Word> images;
    for (const json& im : b["images"]) images.push_back(parse_word(im, "bonding image"));
    e.base.bondings.push_back(symbolic::Substitution(symbolic::Alphabet(ranks[i + 1]),
                                                     symbolic::Alphabet(ranks[i]), std::move(images)));
    ++i;
  }
  e.base.tailPeriod = j.value("tail_period", 0);
  if (j.contains("stages")) {
    for (const json& s : j["stages"]) {
      if (s.is_null())
        e.stages.emplace_back(std::nullopt);
      else if (s.is_string())
        e.stages.emplace_back(diagram::builtin_fixture(s.get<std::string>()));
      else
        e.stages.emplace_back(parse_stage(s));
    }
  }
  expansion::validate(e);
  return e;
}

inline json expansion_json(const expansion::EmbeddedExpansion& e) {
  json j;
  j["ranks"] = e.base.ranks;
  json bondings = json::array();
  for (const symbolic::Substitution& b : e.base.bondings) {
    json bj;
    json images = json::array();
    for (const symbolic::Word& im : b.images()) {
      json arr = json::array();
      for (symbolic::Letter x : im) arr.push_back(int(x));
      images.push_back(arr);
    }
    bj["images"] = images;
    bondings.push_back(bj);
  }
  j["bondings"] = bondings;
  j["tail_period"] = e.base.tailPeriod;
  json stages = json::array();
  for (const auto& s : e.stages) stages.push_back(s ? stage_json(*s) : json());
  j["stages"] = stages;
  return j;
}

}  // namespace flowknot::serial
