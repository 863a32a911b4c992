#pragma once

// Finitely presented groups on the scale this library needs: freely reduced
// words, presentations with tracked generator names, Tietze simplification
// with a rewrite map back to the original generators, Nielsen reduction of
// word tuples, abelianization through Smith normal form, brute-force counting
// of homomorphisms into small finite groups, and the supernatural bookkeeping
// for rank-one direct limits.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "flowknot/errors.hpp"
#include "flowknot/intmat.hpp"

namespace flowknot::fpgroup {

// ---------------------------------------------------------------------------
// Words

/// A freely reduced word in generators g0, g1, ...; letter +(g+1) is the
/// generator, -(g+1) its inverse. Reduction is maintained as an invariant by
/// every mutating operation.
class GroupWord {
 public:
  GroupWord() = default;

  static GroupWord generator(int g, int sign = 1) {
    GroupWord w;
    w.push(sign >= 0 ? g + 1 : -(g + 1));
    return w;
  }

  /// Build from (generator, exponent) steps; exponents may be any integer.
  static GroupWord from_steps(const std::vector<std::pair<int, int>>& steps) {
    GroupWord w;
    for (auto [g, e] : steps) {
      if (g < 0) throw invalid_input("negative generator index in word");
      const int letter = e >= 0 ? g + 1 : -(g + 1);
      for (int k = 0; k < std::abs(e); ++k) w.push(letter);
    }
    return w;
  }

  static GroupWord from_letters(const std::vector<std::int32_t>& letters) {
    GroupWord w;
    for (std::int32_t l : letters) {
      if (l == 0) throw invalid_input("zero letter in word");
      w.push(l);
    }
    return w;
  }

  const std::vector<std::int32_t>& letters() const { return ls_; }
  std::size_t size() const { return ls_.size(); }
  bool empty() const { return ls_.empty(); }

  void push(std::int32_t letter) {
    if (!ls_.empty() && ls_.back() == -letter)
      ls_.pop_back();
    else
      ls_.push_back(letter);
  }

  void append(const GroupWord& o) {
    for (std::int32_t l : o.ls_) push(l);
  }

  GroupWord operator*(const GroupWord& o) const {
    GroupWord r = *this;
    r.append(o);
    return r;
  }

  GroupWord inverse() const {
    GroupWord r;
    r.ls_.reserve(ls_.size());
    for (auto it = ls_.rbegin(); it != ls_.rend(); ++it) r.ls_.push_back(-*it);
    return r;
  }

  GroupWord cyclically_reduced() const {
    std::size_t a = 0, b = ls_.size();
    while (b > a + 1 && ls_[a] == -ls_[b - 1]) {
      ++a;
      --b;
    }
    GroupWord r;
    r.ls_.assign(ls_.begin() + long(a), ls_.begin() + long(b));
    return r;
  }

  /// Largest generator index used, or -1 for the empty word.
  int max_generator() const {
    int m = -1;
    for (std::int32_t l : ls_) m = std::max(m, std::abs(l) - 1);
    return m;
  }

  int occurrences(int g) const {
    int c = 0;
    for (std::int32_t l : ls_)
      if (std::abs(l) == g + 1) ++c;
    return c;
  }

  /// Replace every occurrence of generator g by `repl` (inverted as needed).
  GroupWord substituted(int g, const GroupWord& repl) const {
    GroupWord out;
    const GroupWord inv = repl.inverse();
    for (std::int32_t l : ls_) {
      if (l == g + 1)
        out.append(repl);
      else if (l == -(g + 1))
        out.append(inv);
      else
        out.push(l);
    }
    return out;
  }

  /// Renumber generators; map[g] must be >= 0 for every g that occurs.
  GroupWord remapped(const std::vector<int>& map) const {
    GroupWord out;
    for (std::int32_t l : ls_) {
      const int g = std::abs(l) - 1;
      if (g >= int(map.size()) || map[g] < 0) throw internal_error("generator remap misses a used generator");
      out.push(l > 0 ? map[g] + 1 : -(map[g] + 1));
    }
    return out;
  }

  bool operator==(const GroupWord& o) const { return ls_ == o.ls_; }
  bool operator!=(const GroupWord& o) const { return ls_ != o.ls_; }

  /// Length-first order; within a length, lexicographic with g < g^-1 < g+1.
  bool operator<(const GroupWord& o) const {
    if (ls_.size() != o.ls_.size()) return ls_.size() < o.ls_.size();
    auto key = [](std::int32_t l) { return std::abs(l) * 2 + (l < 0 ? 1 : 0); };
    for (std::size_t i = 0; i < ls_.size(); ++i)
      if (key(ls_[i]) != key(o.ls_[i])) return key(ls_[i]) < key(o.ls_[i]);
    return false;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (ls_.empty()) return "1";
    std::string s;
    std::size_t i = 0;
    while (i < ls_.size()) {
      std::size_t j = i;
      while (j < ls_.size() && ls_[j] == ls_[i]) ++j;
      const int g = std::abs(ls_[i]) - 1;
      const long long e = (ls_[i] > 0 ? 1 : -1) * (long long)(j - i);
      if (!s.empty()) s += " ";
      s += g < int(names.size()) ? names[std::size_t(g)] : "g" + std::to_string(g);
      if (e != 1) s += "^" + std::to_string(e);
      i = j;
    }
    return s;
  }

 private:
  std::vector<std::int32_t> ls_;
};

/// Canonical representative of the conjugacy-and-inversion class of a
/// cyclically reduced word: minimum over all rotations of the word and its
/// inverse. Used to deduplicate relators.
inline GroupWord canonical_cyclic(const GroupWord& w) {
  const GroupWord c = w.cyclically_reduced();
  if (c.empty()) return c;
  GroupWord best = c;
  for (const GroupWord& base : {c, c.inverse()}) {
    const auto& ls = base.letters();
    for (std::size_t r = 0; r < ls.size(); ++r) {
      std::vector<std::int32_t> rot(ls.begin() + long(r), ls.end());
      rot.insert(rot.end(), ls.begin(), ls.begin() + long(r));
      const GroupWord cand = GroupWord::from_letters(rot);
      if (cand.size() == c.size() && cand < best) best = cand;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Presentations and morphisms

struct GroupPresentation {
  int rank = 0;
  std::vector<GroupWord> relators;
  std::vector<std::string> names;  // one per generator

  GroupPresentation() = default;
  GroupPresentation(int rank_, std::vector<GroupWord> relators_, std::vector<std::string> names_ = {})
      : rank(rank_), relators(std::move(relators_)), names(std::move(names_)) {
    if (rank < 0) throw invalid_input("presentation rank is negative");
    for (const GroupWord& r : relators)
      if (r.max_generator() >= rank) throw invalid_input("relator uses a generator beyond the rank");
    if (names.empty())
      for (int g = 0; g < rank; ++g) names.push_back("g" + std::to_string(g));
    if (int(names.size()) != rank) throw invalid_input("presentation needs one name per generator");
  }

  bool is_free() const { return relators.empty(); }

  /// rank + total relator length; the quantity simplification minimizes.
  int size() const {
    int s = rank;
    for (const GroupWord& r : relators) s += int(r.size());
    return s;
  }

  std::string str() const {
    std::string s = "< ";
    for (int g = 0; g < rank; ++g) s += (g ? ", " : "") + names[std::size_t(g)];
    if (!relators.empty()) {
      s += " | ";
      for (std::size_t i = 0; i < relators.size(); ++i) s += (i ? ", " : "") + relators[i].str(names);
    }
    return s + " >";
  }
};

inline GroupPresentation free_group(int rank, std::vector<std::string> names = {}) {
  return GroupPresentation(rank, {}, std::move(names));
}

inline GroupWord apply_images(const std::vector<GroupWord>& images, const GroupWord& w) {
  GroupWord out;
  for (std::int32_t l : w.letters()) {
    const int g = std::abs(l) - 1;
    if (g >= int(images.size())) throw invalid_input("word uses a generator with no assigned image");
    out.append(l > 0 ? images[std::size_t(g)] : images[std::size_t(g)].inverse());
  }
  return out;
}

/// A homomorphism given on generators. When the target is free the relator
/// images can be checked to vanish and the morphism is marked verified;
/// against a relator-bearing target the data is recorded unverified.
struct GroupMorphism {
  GroupPresentation source, target;
  std::vector<GroupWord> images;  // one per source generator
  bool verified = false;
};

inline GroupMorphism make_morphism(GroupPresentation source, GroupPresentation target,
                                   std::vector<GroupWord> images) {
  if (int(images.size()) != source.rank) throw invalid_input("morphism needs one image per source generator");
  for (const GroupWord& w : images)
    if (w.max_generator() >= target.rank) throw invalid_input("morphism image uses a generator beyond target rank");
  GroupMorphism m{std::move(source), std::move(target), std::move(images), false};
  if (m.target.is_free()) {
    for (const GroupWord& r : m.source.relators)
      if (!apply_images(m.images, r).empty())
        throw invalid_input("morphism does not kill a source relator of a free target");
    m.verified = true;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Tietze simplification

struct TietzeResult {
  GroupPresentation presentation;
  /// Image of each original generator as a word over the kept generators.
  std::vector<GroupWord> rewrite;
  /// keptOriginal[new index] = original generator index.
  std::vector<int> keptOriginal;
  int moves = 0;
  bool budgetExhausted = false;
};

namespace detail {

inline void tietze_normalize(std::vector<GroupWord>& relators) {
  for (GroupWord& r : relators) r = canonical_cyclic(r);
  relators.erase(std::remove_if(relators.begin(), relators.end(),
                                [](const GroupWord& r) { return r.empty(); }),
                 relators.end());
  std::sort(relators.begin(), relators.end());
  relators.erase(std::unique(relators.begin(), relators.end()), relators.end());
}

struct TietzeMove {
  long long estimate;
  int gen;
  std::size_t relator;
  int sign;  // exponent of the single occurrence
};

}  // namespace detail

/// Shrink a presentation by repeatedly (a) free/cyclic reduction and duplicate
/// removal, (b) eliminating a generator that occurs exactly once in some
/// relator (solving that relator for it). Moves are chosen greedily by the
/// smallest estimated resulting size; the best state seen is returned, along
/// with the induced rewriting of the original generators.
inline TietzeResult tietze_simplify(const GroupPresentation& p, int budget = 1000) {
  std::vector<GroupWord> relators = p.relators;
  std::vector<std::string> names = p.names;
  std::vector<int> keptOriginal(std::size_t(p.rank));
  for (int g = 0; g < p.rank; ++g) keptOriginal[std::size_t(g)] = g;
  std::vector<GroupWord> rewrite;
  for (int g = 0; g < p.rank; ++g) rewrite.push_back(GroupWord::generator(g));
  int rank = p.rank;

  detail::tietze_normalize(relators);

  auto current_size = [&]() {
    long long s = rank;
    for (const GroupWord& r : relators) s += (long long)r.size();
    return s;
  };

  TietzeResult best;
  int moves = 0;
  bool exhausted = false;
  auto snapshot = [&]() {
    best.presentation = GroupPresentation(rank, relators, names);
    best.rewrite = rewrite;
    best.keptOriginal = keptOriginal;
    best.moves = moves;
  };
  snapshot();
  long long bestSize = current_size();

  for (;;) {
    // Collect elimination candidates: (relator, generator occurring once).
    std::optional<detail::TietzeMove> pick;
    const long long total = current_size();
    for (std::size_t ri = 0; ri < relators.size(); ++ri) {
      const GroupWord& r = relators[ri];
      for (int g = 0; g < rank; ++g) {
        if (r.occurrences(g) != 1) continue;
        long long occElse = 0;
        for (std::size_t rj = 0; rj < relators.size(); ++rj)
          if (rj != ri) occElse += relators[rj].occurrences(g);
        const long long est =
            (total - 1) - (long long)r.size() + occElse * ((long long)r.size() - 2);
        int sign = 0;
        for (std::int32_t l : r.letters())
          if (std::abs(l) == g + 1) sign = l > 0 ? 1 : -1;
        detail::TietzeMove mv{est, g, ri, sign};
        if (!pick || std::tie(mv.estimate, mv.gen, mv.relator) <
                         std::tie(pick->estimate, pick->gen, pick->relator))
          pick = mv;
      }
    }
    if (!pick) break;
    if (moves >= budget) {
      exhausted = true;
      break;
    }
    ++moves;

    // Solve r = u g^sign v  for g and substitute everywhere.
    const GroupWord r = relators[pick->relator];
    std::vector<std::int32_t> u, v;
    bool seen = false;
    for (std::int32_t l : r.letters()) {
      if (!seen && std::abs(l) == pick->gen + 1) {
        seen = true;
        continue;
      }
      (seen ? v : u).push_back(l);
    }
    const GroupWord uw = GroupWord::from_letters(u), vw = GroupWord::from_letters(v);
    // u g v = 1  =>  g = u^-1 v^-1 ; u g^-1 v = 1  =>  g = v u.
    const GroupWord repl = pick->sign > 0 ? uw.inverse() * vw.inverse() : vw * uw;

    relators.erase(relators.begin() + long(pick->relator));
    for (GroupWord& w : relators) w = w.substituted(pick->gen, repl);
    for (GroupWord& w : rewrite) w = w.substituted(pick->gen, repl);

    std::vector<int> map(static_cast<std::size_t>(rank), -1);
    for (int g = 0; g < rank; ++g)
      if (g != pick->gen) map[std::size_t(g)] = g < pick->gen ? g : g - 1;
    for (GroupWord& w : relators) w = w.remapped(map);
    for (GroupWord& w : rewrite) w = w.remapped(map);
    names.erase(names.begin() + pick->gen);
    keptOriginal.erase(keptOriginal.begin() + pick->gen);
    --rank;

    detail::tietze_normalize(relators);
    if (current_size() < bestSize) {
      bestSize = current_size();
      snapshot();
    }
  }
  best.moves = moves;
  best.budgetExhausted = exhausted;
  return best;
}

// ---------------------------------------------------------------------------
// Abelianization

struct AbelianGroup {
  long long freeRank = 0;
  std::vector<bigint> torsion;  // entries > 1 in divisibility order

  bool operator==(const AbelianGroup& o) const {
    return freeRank == o.freeRank && torsion == o.torsion;
  }

  std::string str() const {
    std::string s;
    if (freeRank == 1) s = "Z";
    if (freeRank > 1) s = "Z^" + std::to_string(freeRank);
    for (const bigint& d : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + d.str());
    return s.empty() ? "0" : s;
  }
};

/// Exponent-sum matrix of the relators: one row per relator, one column per
/// generator.
inline IntMatrix relation_matrix(const GroupPresentation& p) {
  IntMatrix m(p.relators.size(), std::size_t(p.rank));
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (std::int32_t l : p.relators[i].letters())
      m.at(i, std::size_t(std::abs(l) - 1)) += l > 0 ? 1 : -1;
  return m;
}

inline AbelianGroup abelianize(const GroupPresentation& p) {
  const std::vector<bigint> inv = smith_invariants(relation_matrix(p));
  AbelianGroup a;
  a.freeRank = p.rank - (long long)inv.size();
  for (const bigint& d : inv)
    if (d > 1) a.torsion.push_back(d);
  return a;
}

// ---------------------------------------------------------------------------
// Nielsen reduction

struct NielsenResult {
  std::vector<GroupWord> words;  // reduced tuple, sorted, inverse-normalized
  bool isBasis = false;          // true iff the tuple is a free basis of F_rank
};

/// Greedy Nielsen length reduction: repeatedly replace a word by a strictly
/// shorter product with another tuple element (or its inverse) until no move
/// shortens anything. The spanned subgroup is preserved. A tuple that ends as
/// `rank` distinct single letters is certified a basis; the flag is
/// conservative and never claims a basis otherwise.
inline NielsenResult nielsen_reduce(std::vector<GroupWord> ws, int rank) {
  auto normalize = [&]() {
    ws.erase(std::remove_if(ws.begin(), ws.end(), [](const GroupWord& w) { return w.empty(); }),
             ws.end());
    for (GroupWord& w : ws) {
      const GroupWord inv = w.inverse();
      if (inv < w) w = inv;
    }
    std::sort(ws.begin(), ws.end());
  };
  normalize();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < ws.size() && !changed; ++j)
      for (std::size_t i = 0; i < ws.size() && !changed; ++i) {
        if (i == j) continue;
        const GroupWord cands[4] = {ws[i] * ws[j], ws[i].inverse() * ws[j], ws[j] * ws[i],
                                    ws[j] * ws[i].inverse()};
        for (const GroupWord& c : cands)
          if (c.size() < ws[j].size()) {
            ws[j] = c;
            changed = true;
            break;
          }
      }
    if (changed) normalize();
  }
  NielsenResult res;
  res.words = ws;
  if (int(ws.size()) == rank) {
    std::vector<bool> seen(std::size_t(rank), false);
    bool basis = true;
    for (const GroupWord& w : ws) {
      if (w.size() != 1) {
        basis = false;
        break;
      }
      const int g = std::abs(w.letters()[0]) - 1;
      if (g >= rank || seen[std::size_t(g)]) {
        basis = false;
        break;
      }
      seen[std::size_t(g)] = true;
    }
    res.isBasis = basis;
  }
  return res;
}

/// Do the given images of the rank generators define an automorphism of the
/// free group of that rank? (Sound when true; a false return means the greedy
/// reduction could not certify a basis.)
inline bool is_free_automorphism(int rank, const std::vector<GroupWord>& images) {
  if (int(images.size()) != rank) return false;
  return nielsen_reduce(images, rank).isBasis;
}

// ---------------------------------------------------------------------------
// Counting homomorphisms into small groups

struct HomTarget {
  enum class Kind { symmetric, cyclic };
  Kind kind = Kind::cyclic;
  int param = 1;  // k for S_k, m for Z/m

  static HomTarget symmetric(int k) {
    if (k < 2 || k > 4) throw invalid_input("symmetric targets supported: S2, S3, S4");
    return HomTarget{Kind::symmetric, k};
  }
  static HomTarget cyclic(int m) {
    if (m < 1) throw invalid_input("cyclic target order must be >= 1");
    if (m > 24) throw resource_error("cyclic targets are limited to order <= 24");
    return HomTarget{Kind::cyclic, m};
  }
  /// Accepts "s2", "s3", "s4", "z/m" (case-insensitive).
  static HomTarget parse(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (s == "s2" || s == "s3" || s == "s4") return symmetric(s[1] - '0');
    if (s.rfind("z/", 0) == 0) {
      try {
        return cyclic(std::stoi(s.substr(2)));
      } catch (const std::exception&) {
        throw invalid_input("cannot parse cyclic target order: " + s);
      }
    }
    throw invalid_input("unknown homomorphism target: " + s + " (expected s2|s3|s4|z/m)");
  }

  long long order() const {
    if (kind == Kind::cyclic) return param;
    long long f = 1;
    for (int i = 2; i <= param; ++i) f *= i;
    return f;
  }
  std::string name() const {
    return kind == Kind::cyclic ? "Z/" + std::to_string(param) : "S" + std::to_string(param);
  }
};

/// Exhaustively count homomorphisms from the presented group into the target.
/// Bounds: source rank <= 6, target order <= 24.
inline long long count_homs(const GroupPresentation& p, const HomTarget& t) {
  if (p.rank > 6) throw resource_error("hom counting is limited to presentations of rank <= 6");
  const long long n = t.order();
  if (n > 24) throw resource_error("hom counting is limited to targets of order <= 24");

  // Multiplication and inverse tables for the target.
  std::vector<std::vector<int>> mult;
  std::vector<int> inv;
  int id = 0;
  if (t.kind == HomTarget::Kind::cyclic) {
    mult.assign(std::size_t(n), std::vector<int>(std::size_t(n)));
    inv.assign(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) {
      inv[std::size_t(i)] = int((n - i) % n);
      for (int j = 0; j < n; ++j) mult[std::size_t(i)][std::size_t(j)] = int((i + j) % n);
    }
  } else {
    std::vector<std::vector<int>> perms;
    std::vector<int> base(std::size_t(t.param));
    for (int i = 0; i < t.param; ++i) base[std::size_t(i)] = i;
    std::vector<int> q = base;
    do {
      perms.push_back(q);
    } while (std::next_permutation(q.begin(), q.end()));
    const int sz = int(perms.size());
    auto index_of = [&](const std::vector<int>& v) {
      return int(std::find(perms.begin(), perms.end(), v) - perms.begin());
    };
    mult.assign(std::size_t(sz), std::vector<int>(std::size_t(sz)));
    inv.assign(std::size_t(sz), 0);
    for (int i = 0; i < sz; ++i) {
      std::vector<int> vi(std::size_t(t.param));
      for (int x = 0; x < t.param; ++x)
        vi[std::size_t(perms[std::size_t(i)][std::size_t(x)])] = x;
      inv[std::size_t(i)] = index_of(vi);
      for (int j = 0; j < sz; ++j) {
        std::vector<int> comp(std::size_t(t.param));
        for (int x = 0; x < t.param; ++x)
          comp[std::size_t(x)] = perms[std::size_t(i)][std::size_t(perms[std::size_t(j)][std::size_t(x)])];
        mult[std::size_t(i)][std::size_t(j)] = index_of(comp);
      }
    }
    id = index_of(base);
  }
  const int order = int(mult.size());

  // Bucket relators by their largest generator so each is checked as soon as
  // its generators are assigned.
  std::vector<std::vector<const GroupWord*>> bucket(std::size_t(p.rank) + 1);
  for (const GroupWord& r : p.relators)
    if (!r.empty()) bucket[std::size_t(r.max_generator())].push_back(&r);

  std::vector<int> img(std::size_t(std::max(p.rank, 1)), id);
  auto eval = [&](const GroupWord& w) {
    int acc = id;
    for (std::int32_t l : w.letters()) {
      const int x = img[std::size_t(std::abs(l) - 1)];
      acc = mult[std::size_t(acc)][std::size_t(l > 0 ? x : inv[std::size_t(x)])];
    }
    return acc;
  };

  long long count = 0;
  auto dfs = [&](auto&& self, int g) -> void {
    if (g == p.rank) {
      ++count;
      return;
    }
    for (int e = 0; e < order; ++e) {
      img[std::size_t(g)] = e;
      bool ok = true;
      for (const GroupWord* r : bucket[std::size_t(g)])
        if (eval(*r) != id) {
          ok = false;
          break;
        }
      if (ok) self(self, g + 1);
    }
  };
  dfs(dfs, 0);
  return count;
}

// ---------------------------------------------------------------------------
// Rank-one direct limits

/// A supernatural number: finitely many primes with multiplicities, where a
/// missing multiplicity means the prime occurs infinitely often. `depth`
/// records how many winding numbers were sampled to produce it.
struct Supernatural {
  std::vector<std::pair<long long, std::optional<long long>>> primes;  // sorted by prime
  int depth = 0;

  bool all_infinite() const {
    for (const auto& [p, m] : primes)
      if (m) return false;
    return !primes.empty();
  }

  std::string str() const {
    if (primes.empty()) return "1";
    std::string s;
    for (const auto& [p, m] : primes) {
      if (!s.empty()) s += "*";
      s += std::to_string(p) + "^" + (m ? std::to_string(*m) : "inf");
    }
    return s;
  }

  /// "Z", "Z[1/2]", "Z[1/6]" for the clean cases; otherwise the raw
  /// descriptor with the finite part spelled out.
  std::string group_str() const {
    if (primes.empty()) return "Z";
    if (all_infinite()) {
      long long prod = 1;
      for (const auto& [p, m] : primes) prod *= p;
      return "Z[1/" + std::to_string(prod) + "]";
    }
    return "colimit(Z; " + str() + ")";
  }
};

inline std::vector<std::pair<long long, int>> factorize(long long n) {
  if (n < 1) throw invalid_input("factorize expects a positive integer");
  std::vector<std::pair<long long, int>> fs;
  for (long long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      fs.emplace_back(p, e);
    }
  if (n > 1) fs.emplace_back(n, 1);
  return fs;
}

/// Direct limit of Z --w1--> Z --w2--> ... where the map at step i is
/// multiplication by windings[i] >= 1. If tailPeriod > 0 the final tailPeriod
/// entries repeat forever, so the primes dividing that block acquire infinite
/// multiplicity.
inline Supernatural colimit_rank1(const std::vector<long long>& windings, int tailPeriod = 0) {
  if (tailPeriod < 0 || tailPeriod > int(windings.size()))
    throw invalid_input("colimit tail period out of range");
  std::vector<std::pair<long long, long long>> acc;  // (prime, finite multiplicity)
  auto add = [&](long long p, long long e) {
    for (auto& [q, m] : acc)
      if (q == p) {
        m += e;
        return;
      }
    acc.emplace_back(p, e);
  };
  for (long long w : windings) {
    if (w < 1) throw invalid_input("winding numbers must be >= 1");
    for (auto [p, e] : factorize(w)) add(p, e);
  }
  std::vector<long long> infinitePrimes;
  for (std::size_t i = windings.size() - std::size_t(tailPeriod); i < windings.size(); ++i)
    for (auto [p, e] : factorize(windings[i])) infinitePrimes.push_back(p);
  Supernatural s;
  s.depth = int(windings.size());
  for (auto [p, m] : acc) {
    const bool inf = std::find(infinitePrimes.begin(), infinitePrimes.end(), p) != infinitePrimes.end();
    s.primes.emplace_back(p, inf ? std::optional<long long>{} : std::optional<long long>{m});
  }
  std::sort(s.primes.begin(), s.primes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return s;
}

// ---------------------------------------------------------------------------
// Image rank of a morphism

struct ImageRank {
  long long rank = 0;
  enum class Method { nielsenFree, abelianized } method = Method::nielsenFree;

  std::string method_str() const {
    return method == Method::nielsenFree ? "nielsen-free" : "abelianized";
  }
};

/// Rank of the image subgroup of a morphism. If the simplified target is
/// free, the image rank is exact (Nielsen reduction of the rewritten images).
/// Otherwise fall back to the abelianized image: rank([A | R]) - rank(R),
/// with A the image exponent columns and R the target relation rows.
inline ImageRank image_rank(const GroupMorphism& m, int tietzeBudget = 1000) {
  const TietzeResult t = tietze_simplify(m.target, tietzeBudget);
  std::vector<GroupWord> imgs;
  imgs.reserve(m.images.size());
  for (const GroupWord& w : m.images) imgs.push_back(apply_images(t.rewrite, w));
  ImageRank out;
  if (t.presentation.is_free()) {
    out.method = ImageRank::Method::nielsenFree;
    out.rank = (long long)nielsen_reduce(imgs, t.presentation.rank).words.size();
    return out;
  }
  out.method = ImageRank::Method::abelianized;
  const IntMatrix rel = relation_matrix(t.presentation).transpose();  // target-rank rows
  IntMatrix combined(std::size_t(t.presentation.rank), imgs.size() + rel.cols());
  for (std::size_t j = 0; j < imgs.size(); ++j)
    for (std::int32_t l : imgs[j].letters())
      combined.at(std::size_t(std::abs(l) - 1), j) += l > 0 ? 1 : -1;
  for (std::size_t i = 0; i < rel.rows(); ++i)
    for (std::size_t j = 0; j < rel.cols(); ++j) combined.at(i, imgs.size() + j) = rel.at(i, j);
  out.rank = (long long)matrix_rank(combined) - (long long)matrix_rank(rel);
  return out;
}

// ---------------------------------------------------------------------------
// Direct systems

struct DirectSystem {
  std::vector<GroupPresentation> groups;
  std::vector<GroupMorphism> maps;  // maps[i] : groups[i] -> groups[i+1]
};

inline void validate(const DirectSystem& s) {
  if (s.groups.empty()) throw invalid_input("direct system has no groups");
  if (s.maps.size() + 1 != s.groups.size())
    throw invalid_input("direct system needs exactly one map between consecutive groups");
  for (std::size_t i = 0; i < s.maps.size(); ++i) {
    if (s.maps[i].source.rank != s.groups[i].rank || s.maps[i].target.rank != s.groups[i + 1].rank)
      throw invalid_input("direct system map ranks do not match the adjacent groups");
  }
}

/// Rank of the image of groups[stage] inside groups[stage+1] along the
/// system's map, via image_rank.
inline ImageRank stable_image_rank(const DirectSystem& s, std::size_t stage,
                                   int tietzeBudget = 1000) {
  if (stage >= s.maps.size())
    throw invalid_input("stable_image_rank stage has no outgoing map in the system");
  return image_rank(s.maps[stage], tietzeBudget);
}

}  // namespace flowknot::fpgroup
