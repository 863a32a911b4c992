#pragma once

// Closed orbits on the two-strip template, presented as binary words. A
// periodic word closes to a positive braid: strands are the cyclic rotations
// in lexicographic order (0 before 1), the return map shifts each rotation by
// one letter, and crossings are the inversions of that permutation. The genus
// bound for such a braid closure is exact on knots, which is what lets a
// family of re-embedded seed words certify infinitely many distinct knots.

#include <algorithm>
#include <string>
#include <vector>

#include "flowknot/errors.hpp"
#include "flowknot/symbolic.hpp"

namespace flowknot::lorenz {

struct PrimitiveDecomposition {
  symbolic::Word root;
  int power = 1;  // word == root repeated `power` times
};

inline PrimitiveDecomposition primitive_root(const symbolic::Word& w) {
  if (w.empty()) throw invalid_input("orbit word is empty");
  const std::size_t n = w.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return {symbolic::Word(w.begin(), w.begin() + long(d)), int(n / d)};
  }
  throw internal_error("primitive root search fell through");
}

struct LorenzBraid {
  int strands = 0;
  std::vector<int> permutation;  // sorted rotation i advances to sorted rotation permutation[i]
  long long crossings = 0;
};

/// Braid of the closed orbit spelled by a primitive binary word. Repeated
/// words are rejected (the caller should reduce to the primitive root first);
/// the message names the repetition.
inline LorenzBraid lorenz_braid(const symbolic::Word& w) {
  if (w.empty()) throw invalid_input("orbit word is empty");
  for (symbolic::Letter x : w)
    if (x > 1) throw invalid_input("orbit words live on the two-letter template alphabet {0,1}");
  const PrimitiveDecomposition pd = primitive_root(w);
  if (pd.power != 1)
    throw invalid_input("orbit word is a block of length " + std::to_string(pd.root.size()) +
                        " repeated " + std::to_string(pd.power) + " times; pass its primitive root");

  const std::size_t n = w.size();
  std::vector<symbolic::Word> rotations;
  rotations.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    symbolic::Word rot(w.begin() + long(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + long(r));
    rotations.push_back(std::move(rot));
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rotations[a] < rotations[b]; });
  std::vector<int> rankOf(n);  // rotation start -> sorted position
  for (std::size_t i = 0; i < n; ++i) rankOf[order[i]] = int(i);

  LorenzBraid b;
  b.strands = int(n);
  b.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) b.permutation[i] = rankOf[(order[i] + 1) % n];

  // A primitive word must close up into a single cycle.
  std::size_t seen = 0, at = 0;
  do {
    at = std::size_t(b.permutation[at]);
    ++seen;
  } while (at != 0 && seen <= n);
  if (seen != n) throw internal_error("orbit permutation of a primitive word is not a single cycle");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (b.permutation[i] > b.permutation[j]) ++b.crossings;
  return b;
}

/// Genus of the positive braid closure: (crossings - strands + 1) / 2.
/// The numerator of a single closed orbit is always even and nonnegative;
/// anything else indicates an internal inconsistency.
inline long long genus_lower_bound(const LorenzBraid& b) {
  const long long e = b.crossings - b.strands + 1;
  if (e < 0 || e % 2 != 0)
    throw internal_error("braid closure Euler characteristic " + std::to_string(-e) +
                         " is not that of a knot Seifert surface");
  return e / 2;
}

// ---------------------------------------------------------------------------
// Loop words of a two-letter substitution

struct LoopWords {
  PrimitiveDecomposition zero, one;  // decompositions of the images of 0 and 1
};

/// The two letter-images of a square two-letter substitution, reduced to
/// primitive roots (power > 1 flags a repeated block; the braid of the root
/// is the honest orbit).
inline LoopWords first_stage_loops(const symbolic::Substitution& sub) {
  if (!sub.is_square() || sub.domain().size() != 2)
    throw invalid_input("loop words require a square substitution on the two-letter alphabet");
  return {primitive_root(sub.image(0)), primitive_root(sub.image(1))};
}

// ---------------------------------------------------------------------------
// Distinct-knot certificates

struct CertificateRow {
  symbolic::SigmaEmbedding emb;  // the re-embedding built from the seed
  symbolic::Word loopWord;       // image of letter 0: the orbit the row rides
  PrimitiveDecomposition rootOf; // loopWord = root^power
  LorenzBraid braid;             // braid of the primitive root
  long long genus = 0;
};

struct Certificate {
  std::vector<CertificateRow> rows;  // strictly increasing genus
  bool complete = false;             // all m rows found within budget
  int relabelPower = 0;
  int seedsTried = 0;
  std::string note;
};

/// Walk seed words w along prefixes of the (relabelled) orbit word, re-embed
/// each via sigma_w, and keep a row whenever the genus of its 0-loop orbit
/// strictly exceeds everything kept so far. Strictly increasing genus bounds
/// pin pairwise distinct knots. Stops after m rows, or flags the certificate
/// incomplete when the seed budget runs out first.
inline Certificate distinct_knot_certificate(const symbolic::Word& orbit, int m, int budget) {
  const symbolic::Alphabet two(2);
  if (m < 1) throw invalid_input("certificate needs at least one row");
  if (budget < 1) throw invalid_input("certificate seed budget must be >= 1");
  symbolic::check_word(orbit, two, "orbit word");

  Certificate cert;
  cert.relabelPower = symbolic::relabel_power_for(orbit, two);
  const symbolic::Word base = symbolic::cyclic_relabel(orbit, cert.relabelPower, two);

  const std::size_t maxLen = std::min<std::size_t>(std::size_t(budget), base.size());
  long long bestGenus = -1;
  for (std::size_t len = 1; len <= maxLen && int(cert.rows.size()) < m; ++len) {
    ++cert.seedsTried;
    symbolic::SigmaEmbedding emb = symbolic::sigma_w(
        symbolic::Word(base.begin(), base.begin() + long(len)), two);
    emb.relabelPower = cert.relabelPower;
    symbolic::Word loopWord = emb.sub.image(0);
    PrimitiveDecomposition rootOf = primitive_root(loopWord);
    LorenzBraid braid = lorenz_braid(rootOf.root);
    const long long genus = genus_lower_bound(braid);
    if (genus > bestGenus) {
      bestGenus = genus;
      cert.rows.push_back(CertificateRow{std::move(emb), std::move(loopWord), std::move(rootOf),
                                         std::move(braid), genus});
    }
  }
  cert.complete = int(cert.rows.size()) == m;
  cert.note = cert.complete
                  ? std::to_string(m) + " strictly increasing genus bounds found"
                  : "seed budget " + std::to_string(budget) + " exhausted after " +
                        std::to_string(cert.rows.size()) + " of " + std::to_string(m) + " rows";
  return cert;
}

/// Orbit word for a substitution: iterate the image of letter 0 until the
/// prefix is long enough to cover the seed budget (or stops growing).
inline symbolic::Word substitution_orbit_word(const symbolic::Substitution& sub, int length) {
  if (!sub.is_square()) throw invalid_input("orbit words need a square substitution");
  symbolic::Word w{0};
  for (int guard = 0; int(w.size()) < length && guard < 64; ++guard) {
    symbolic::Word next = sub.apply(w);
    if (next.size() == w.size()) break;  // fixed point shorter than requested
    w = std::move(next);
  }
  if (int(w.size()) > length) w.resize(std::size_t(length));
  return w;
}

/// Orbit word for a parameter list: the limit of sigma_{n_1} ... sigma_{n_k}
/// applied to 0, extending the list by repeating its final entry.
inline symbolic::Word sturmian_orbit_word(const symbolic::SturmianParams& params, int length) {
  symbolic::Substitution acc = symbolic::sturmian_substitution(params.at(0));
  symbolic::Word w = acc.apply(symbolic::Word{0});
  for (std::size_t i = 1; int(w.size()) < length && i < 64; ++i) {
    acc = symbolic::compose(acc, symbolic::sturmian_substitution(params.at(i)));
    w = acc.apply(symbolic::Word{0});
  }
  if (int(w.size()) > length) w.resize(std::size_t(length));
  return w;
}

}  // namespace flowknot::lorenz
