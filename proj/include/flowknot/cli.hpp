#pragma once

// Report builders behind the command-line tool. Each command returns its exit
// code plus fully rendered output (text or JSON per RunConfig), so the binary
// is a thin argument parser and the test suite can drive commands directly.
//
// Exit codes: 0 success (including flagged-incomplete certificates),
// 2 invalid input, 3 internal invariant failure.

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flowknot/diagram.hpp"
#include "flowknot/errors.hpp"
#include "flowknot/expansion.hpp"
#include "flowknot/fpgroup.hpp"
#include "flowknot/intmat.hpp"
#include "flowknot/lorenz.hpp"
#include "flowknot/serial.hpp"
#include "flowknot/symbolic.hpp"

namespace flowknot::cli {

using serial::json;

struct RunConfig {
  bool json = false;
  int tietzeBudget = 1000;
};

struct CmdResult {
  int exitCode = 0;
  std::string output;
};

inline json conventions_json() {
  return {{"crossing", "sign +1: underOut = over . underIn . over^-1; sign -1 conjugates by over^-1"},
          {"wedge", "product of incoming arcs = product of outgoing arcs, in loop order"},
          {"templateOrder", "strands sorted lexicographically, 0 before 1"}};
}

inline std::string conventions_text() {
  return "conventions: crossing sign +1 conjugates by over (underOut = over underIn over^-1); "
         "wedge relator equates incoming and outgoing products; template strands sort 0 before 1";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::detail::exception& e) {
    throw invalid_input("cannot parse " + path + ": " + e.what());
  }
  return j;
}

/// Run a command body, mapping exceptions to exit codes.
inline CmdResult run_command(const std::function<CmdResult()>& body) {
  try {
    return body();
  } catch (const internal_error& e) {
    return {3, std::string("internal error: ") + e.what() + "\n"};
  } catch (const invalid_input& e) {
    return {2, std::string("error: ") + e.what() + "\n"};
  } catch (const nlohmann::detail::exception& e) {
    return {2, std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {3, std::string("internal error: ") + e.what() + "\n"};
  }
}

// ---------------------------------------------------------------------------
// fixture <name>

inline const char* verdict_name(expansion::UnknottedCertificate::Verdict v) {
  switch (v) {
    case expansion::UnknottedCertificate::Verdict::certifiedAllFree:
      return "certified-free";
    case expansion::UnknottedCertificate::Verdict::notFree:
      return "not-free";
    default:
      return "inconclusive";
  }
}

inline CmdResult cmd_fixture(const std::string& name, const RunConfig& cfg) {
  const diagram::EmbeddingStage st = diagram::builtin_fixture(name);
  const fpgroup::GroupPresentation pres = diagram::wirtinger(st.diagram);
  const fpgroup::TietzeResult simp = fpgroup::tietze_simplify(pres, cfg.tietzeBudget);
  const fpgroup::GroupMorphism incl = diagram::inclusion_morphism(st);
  std::vector<fpgroup::GroupWord> simplifiedImages;
  for (const fpgroup::GroupWord& w : incl.images)
    simplifiedImages.push_back(fpgroup::apply_images(simp.rewrite, w));
  const fpgroup::AbelianGroup h1 = fpgroup::abelianize(pres);
  const IntMatrix inclMat = diagram::abelianized_inclusion(st);
  const IntMatrix dual = transition_matrix(*st.bonding).transpose();
  const bool duality = inclMat == dual;
  std::optional<long long> homsS3;
  if (simp.presentation.rank <= 6)
    homsS3 = fpgroup::count_homs(simp.presentation, fpgroup::HomTarget::symmetric(3));
  // Freeness verdict of the repeating tower this stage generates, and whether
  // the (simplified) inclusion is itself a free-group automorphism.
  const fpgroup::DirectSystem sys = expansion::knot_group_system(expansion::builtin_expansion(name), 2);
  const expansion::UnknottedCertificate cert = expansion::unknotted_certificate(sys, cfg.tietzeBudget);
  std::optional<bool> automorphism;
  if (simp.presentation.is_free() && int(simplifiedImages.size()) == simp.presentation.rank)
    automorphism = fpgroup::is_free_automorphism(simp.presentation.rank, simplifiedImages);
  const fpgroup::ImageRank imgRank = fpgroup::image_rank(incl, cfg.tietzeBudget);

  if (cfg.json) {
    json j;
    j["command"] = "fixture";
    j["fixture"] = name;
    j["arcs"] = st.diagram.arcs;
    j["arcNames"] = diagram::arc_names(st.diagram);
    j["loops"] = st.diagram.loops;
    j["crossings"] = int(st.diagram.crossings.size());
    j["presentation"] = serial::presentation_json(pres);
    j["simplified"] = serial::presentation_json(simp.presentation);
    json imgs = json::array(), simgs = json::array();
    for (const fpgroup::GroupWord& w : incl.images) imgs.push_back(w.str(pres.names));
    for (const fpgroup::GroupWord& w : simplifiedImages) simgs.push_back(w.str(simp.presentation.names));
    j["inclusion"] = {{"images", imgs},
                      {"simplifiedImages", simgs},
                      {"automorphism", automorphism ? json(*automorphism) : json()},
                      {"imageRank", imgRank.rank},
                      {"imageRankMethod", imgRank.method_str()}};
    j["h1"] = serial::abelian_json(h1);
    j["duality"] = {{"holds", duality},
                    {"inclusionMatrix", serial::matrix_json(inclMat)},
                    {"transitionTranspose", serial::matrix_json(dual)},
                    {"bonding", serial::substitution_json(*st.bonding)}};
    j["certificate"] = {{"verdict", verdict_name(cert.verdict)}, {"reason", cert.reason}};
    if (homsS3) j["homsS3"] = *homsS3;
    j["conventions"] = conventions_json();
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "fixture: " << name << "\n";
  out << "arcs: " << st.diagram.arcs << ", loops: " << st.diagram.loops.size()
      << ", crossings: " << st.diagram.crossings.size() << "\n";
  out << "wirtinger: " << pres.str() << "\n";
  out << "simplified: " << simp.presentation.str() << " (" << simp.moves << " moves)\n";
  for (std::size_t i = 0; i < incl.images.size(); ++i)
    out << "inclusion t" << i << " -> " << incl.images[i].str(pres.names) << "  (simplified: "
        << simplifiedImages[i].str(simp.presentation.names) << ")\n";
  if (automorphism) out << "inclusion is a free automorphism: " << (*automorphism ? "true" : "false") << "\n";
  out << "inclusion image rank: " << imgRank.rank << " (" << imgRank.method_str() << ")\n";
  out << "H1: " << h1.str() << "\n";
  out << "duality against stored bonding: " << (duality ? "holds" : "FAILS") << "\n";
  out << "freeness verdict: " << verdict_name(cert.verdict) << "\n";
  if (homsS3) out << "homs to S3: " << *homsS3 << "\n";
  out << conventions_text() << "\n";
  return {0, out.str()};
}

// ---------------------------------------------------------------------------
// expansion <file> --depth k

inline CmdResult cmd_expansion(const expansion::EmbeddedExpansion& e, int depth, const RunConfig& cfg) {
  const fpgroup::DirectSystem sys = expansion::knot_group_system(e, depth);
  const expansion::UnknottedCertificate cert = expansion::unknotted_certificate(sys, cfg.tietzeBudget);
  const expansion::StableKnotGroup stable = expansion::stable_knot_group(sys, cfg.tietzeBudget);
  const expansion::CechH1 h1 = expansion::cech_h1(e.base, depth);
  std::vector<fpgroup::ImageRank> imageRanks;
  for (const fpgroup::GroupMorphism& m : sys.maps) imageRanks.push_back(fpgroup::image_rank(m, cfg.tietzeBudget));
  std::vector<bool> duality;
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    const diagram::EmbeddingStage st = expansion::stage_at(e, i);
    duality.push_back(diagram::abelianized_inclusion(st) ==
                      transition_matrix(expansion::bonding_at(e.base, i)).transpose());
  }

  const char* verdictName = verdict_name(cert.verdict);

  if (cfg.json) {
    json j;
    j["command"] = "expansion";
    j["depth"] = int(sys.maps.size());
    json groups = json::array();
    for (std::size_t i = 0; i < sys.groups.size(); ++i) {
      const fpgroup::TietzeResult t = fpgroup::tietze_simplify(sys.groups[i], cfg.tietzeBudget);
      json g;
      g["stage"] = int(i);
      g["rank"] = sys.groups[i].rank;
      g["relators"] = int(sys.groups[i].relators.size());
      g["simplified"] = serial::presentation_json(t.presentation);
      g["h1"] = serial::abelian_json(fpgroup::abelianize(sys.groups[i]));
      groups.push_back(g);
    }
    j["groups"] = groups;
    j["certificate"] = {{"verdict", verdictName}, {"stage", cert.stage}, {"reason", cert.reason}};
    json st;
    st["stage"] = stable.stage ? json(*stable.stage) : json();
    st["group"] = stable.group ? serial::presentation_json(*stable.group) : json();
    st["maps"] = stable.mapIsFreeAutomorphism;
    st["note"] = stable.note;
    j["stableKnotGroup"] = st;
    json ir = json::array();
    for (const fpgroup::ImageRank& r : imageRanks)
      ir.push_back(json{{"rank", r.rank}, {"method", r.method_str()}});
    j["imageRanks"] = ir;
    j["dualityPerStage"] = duality;
    json h;
    h["rankOne"] = h1.rankOne;
    if (h1.rankOne) {
      h["windings"] = h1.windings;
      h["colimit"] = serial::supernatural_json(h1.colimit);
    }
    json maps = json::array();
    for (const IntMatrix& m : h1.maps) maps.push_back(serial::matrix_json(m));
    h["maps"] = maps;
    json dets = json::array();
    for (const bigint& d : h1.dets) dets.push_back(d.str());
    h["dets"] = dets;
    h["stableRank"] = h1.stableRank;
    h["note"] = h1.note;
    j["cechH1"] = h;
    j["conventions"] = conventions_json();
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "expansion with " << sys.maps.size() << " bonding steps\n";
  for (std::size_t i = 0; i < sys.groups.size(); ++i) {
    const fpgroup::TietzeResult t = fpgroup::tietze_simplify(sys.groups[i], cfg.tietzeBudget);
    out << "P" << i << ": rank " << sys.groups[i].rank << ", " << sys.groups[i].relators.size()
        << " relators; simplified: " << t.presentation.str()
        << "; H1: " << fpgroup::abelianize(sys.groups[i]).str() << "\n";
  }
  out << "freeness certificate: " << verdictName << " (" << cert.reason << ")\n";
  if (stable.stage)
    out << "stable knot group from stage " << *stable.stage << ": " << stable.group->str() << "\n";
  else
    out << "stable knot group: none (" << stable.note << ")\n";
  out << "image ranks per step:";
  for (const fpgroup::ImageRank& r : imageRanks) out << " " << r.rank << "(" << r.method_str() << ")";
  out << "\n";
  out << "duality per stage:";
  for (bool d : duality) out << " " << (d ? "holds" : "FAILS");
  out << "\n";
  out << "cech H1: " << h1.note;
  if (!h1.dets.empty()) {
    out << "; step dets:";
    for (const bigint& d : h1.dets) out << " " << d.str();
  }
  out << "; composite rank " << h1.stableRank << "\n";
  out << conventions_text() << "\n";
  return {0, out.str()};
}

// ---------------------------------------------------------------------------
// sturmian <entries...> [--compare <entries...>]

inline CmdResult cmd_sturmian(const std::vector<int>& entries, const std::optional<std::vector<int>>& compare,
                              const RunConfig& cfg) {
  const symbolic::SturmianParams params(entries);
  std::optional<symbolic::SturmianParams> other;
  if (compare) other.emplace(*compare);

  std::optional<symbolic::Substitution> composed;
  for (int n : params.entries) {
    const symbolic::Substitution s = symbolic::sturmian_substitution(n);
    composed = composed ? symbolic::compose(*composed, s) : s;
  }
  const IntMatrix mat = transition_matrix(*composed);
  const bigint det = determinant(mat);
  std::optional<bool> tails;
  if (other) tails = symbolic::tails_equivalent(params, *other);

  if (cfg.json) {
    json j;
    j["command"] = "sturmian";
    j["entries"] = params.entries;
    json subs = json::array();
    for (int n : params.entries) subs.push_back(serial::substitution_json(symbolic::sturmian_substitution(n)));
    j["substitutions"] = subs;
    j["composed"] = serial::substitution_json(*composed);
    j["transition"] = serial::matrix_json(mat);
    j["det"] = det.str();
    if (other) {
      j["compare"] = other->entries;
      j["tailsEquivalent"] = *tails;
    }
    j["conventions"] = conventions_json();
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "parameters:";
  for (int n : params.entries) out << " " << n;
  out << " (final entry repeats)\n";
  for (int n : params.entries) {
    const symbolic::Substitution s = symbolic::sturmian_substitution(n);
    out << "sigma_" << n << ": 0 -> " << symbolic::word_str(s.image(0)) << ", 1 -> "
        << symbolic::word_str(s.image(1)) << "\n";
  }
  out << "composed: 0 -> " << symbolic::word_str(composed->image(0)) << ", 1 -> "
      << symbolic::word_str(composed->image(1)) << "\n";
  out << "transition matrix: " << mat.str() << ", det " << det.str() << "\n";
  if (other) {
    out << "compare:";
    for (int n : other->entries) out << " " << n;
    out << " -> tails " << (*tails ? "equivalent" : "not equivalent") << "\n";
  }
  return {0, out.str()};
}

// ---------------------------------------------------------------------------
// sigma-w <word> --alphabet n

inline CmdResult cmd_sigma_w(const std::string& wordStr, int alphabet, const RunConfig& cfg) {
  const symbolic::Alphabet a(alphabet);
  const symbolic::Word w = symbolic::word_from_digits(wordStr);
  const symbolic::SigmaEmbedding emb = symbolic::sigma_w(w, a);
  bool distinct = true;
  for (std::size_t i = 0; i < emb.sub.images().size() && distinct; ++i)
    for (std::size_t k = i + 1; k < emb.sub.images().size() && distinct; ++k)
      distinct = !(emb.sub.images()[i] == emb.sub.images()[k]);
  if (!distinct) throw internal_error("sigma_w images are not pairwise distinct");

  if (cfg.json) {
    json j;
    j["command"] = "sigma-w";
    j["w"] = symbolic::word_str(emb.w);
    j["alphabet"] = alphabet;
    j["mu"] = emb.mu;
    j["imageLength"] = 2 * emb.mu + int(w.size());
    j["substitution"] = serial::substitution_json(emb.sub);
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "w = " << symbolic::word_str(emb.w) << " over " << alphabet << " letters\n";
  out << "mu = " << emb.mu << ", every image has length " << 2 * emb.mu + w.size() << "\n";
  for (int i = 0; i < alphabet; ++i)
    out << i << " -> " << symbolic::word_str(emb.sub.image(symbolic::Letter(i))) << "\n";
  return {0, out.str()};
}

// ---------------------------------------------------------------------------
// certificate (--sub <file> | --cf <entries...>) -m <count> --budget <len>

inline CmdResult cmd_certificate(const std::optional<symbolic::Substitution>& sub,
                                 const std::optional<std::vector<int>>& cf, int m, int budget,
                                 const RunConfig& cfg) {
  if (!sub && !cf) throw invalid_input("certificate needs --sub <file> or --cf <entries>");
  if (sub && cf) throw invalid_input("certificate takes either --sub or --cf, not both");
  symbolic::Word orbit;
  if (sub) {
    if (sub->domain().size() != 2 || !sub->is_square())
      throw invalid_input("certificate requires a square substitution on the two-letter alphabet");
    orbit = lorenz::substitution_orbit_word(*sub, budget);
  } else {
    orbit = lorenz::sturmian_orbit_word(symbolic::SturmianParams(*cf), budget);
  }
  const lorenz::Certificate cert = lorenz::distinct_knot_certificate(orbit, m, budget);

  if (cfg.json) {
    json j;
    j["command"] = "certificate";
    j["orbitPrefix"] = symbolic::word_str(orbit);
    json rows = json::array();
    for (const lorenz::CertificateRow& r : cert.rows) {
      json row;
      row["w"] = symbolic::word_str(r.emb.w);
      row["mu"] = r.emb.mu;
      row["loopWord"] = symbolic::word_str(r.loopWord);
      row["strands"] = r.braid.strands;
      row["crossings"] = r.braid.crossings;
      row["genusLB"] = r.genus;
      rows.push_back(row);
    }
    j["rows"] = rows;
    j["complete"] = cert.complete;
    j["relabelPower"] = cert.relabelPower;
    j["seedsTried"] = cert.seedsTried;
    j["note"] = cert.note;
    j["conventions"] = conventions_json();
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "orbit prefix: " << symbolic::word_str(orbit) << "\n";
  for (const lorenz::CertificateRow& r : cert.rows)
    out << "w=" << symbolic::word_str(r.emb.w) << " mu=" << r.emb.mu
        << " loopWord=" << symbolic::word_str(r.loopWord) << " strands=" << r.braid.strands
        << " crossings=" << r.braid.crossings << " genusLB=" << r.genus << "\n";
  out << (cert.complete ? "complete" : "INCOMPLETE") << ": " << cert.note << "\n";
  out << conventions_text() << "\n";
  return {0, out.str()};
}

// ---------------------------------------------------------------------------
// homs <presentation-file> --target s2|s3|s4|z/m

inline CmdResult cmd_homs(const fpgroup::GroupPresentation& pres, const std::string& targetStr,
                          const RunConfig& cfg) {
  const fpgroup::HomTarget target = fpgroup::HomTarget::parse(targetStr);
  const long long count = fpgroup::count_homs(pres, target);
  const fpgroup::AbelianGroup h1 = fpgroup::abelianize(pres);

  if (cfg.json) {
    json j;
    j["command"] = "homs";
    j["presentation"] = serial::presentation_json(pres);
    j["target"] = target.name();
    j["count"] = count;
    j["h1"] = serial::abelian_json(h1);
    return {0, j.dump(2) + "\n"};
  }

  std::ostringstream out;
  out << "presentation: " << pres.str() << "\n";
  out << "homs to " << target.name() << ": " << count << "\n";
  out << "H1: " << h1.str() << "\n";
  return {0, out.str()};
}

}  // namespace flowknot::cli
