#pragma once

// Finite alphabets, symbolic words, and letter-to-word substitutions, together
// with the two constructions used throughout the library: the two-letter
// family sigma_n and the padded re-embedding sigma_w of an arbitrary factor w.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowknot/errors.hpp"
#include "flowknot/intmat.hpp"

namespace flowknot::symbolic {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

class Alphabet {
 public:
  explicit Alphabet(int size) : size_(size) {
    if (size < 1 || size > 255) throw invalid_input("alphabet size must be in 1..255");
  }
  int size() const { return size_; }
  bool operator==(const Alphabet& o) const { return size_ == o.size_; }
  bool operator!=(const Alphabet& o) const { return size_ != o.size_; }

 private:
  int size_;
};

inline void check_word(const Word& w, const Alphabet& a, const char* what) {
  for (Letter x : w)
    if (int(x) >= a.size()) throw invalid_input(std::string(what) + ": letter out of alphabet range");
}

/// Digits for alphabets up to 10 letters, bracketed integers beyond.
inline std::string word_str(const Word& w) {
  bool digits = std::all_of(w.begin(), w.end(), [](Letter x) { return x < 10; });
  std::string s;
  if (digits) {
    for (Letter x : w) s += char('0' + x);
  } else {
    s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(int(w[i]));
    s += "]";
  }
  return s;
}

inline Word word_from_digits(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw invalid_input("word digit string contains a non-digit");
    w.push_back(Letter(c - '0'));
  }
  return w;
}

/// A map sending each domain letter to a nonempty word over the codomain.
/// Most substitutions here are square (domain == codomain), but bonding maps
/// between stages of different rank are supported too.
class Substitution {
 public:
  Substitution(Alphabet domain, Alphabet codomain, std::vector<Word> images)
      : domain_(domain), codomain_(codomain), images_(std::move(images)) {
    if (int(images_.size()) != domain_.size())
      throw invalid_input("substitution needs one image per domain letter");
    for (const Word& im : images_) {
      if (im.empty()) throw invalid_input("substitution image is empty");
      check_word(im, codomain_, "substitution image");
    }
  }

  static Substitution square(int alphabet, std::vector<Word> images) {
    Alphabet a(alphabet);
    return Substitution(a, a, std::move(images));
  }

  const Alphabet& domain() const { return domain_; }
  const Alphabet& codomain() const { return codomain_; }
  bool is_square() const { return domain_ == codomain_; }
  const Word& image(Letter x) const {
    if (int(x) >= domain_.size()) throw invalid_input("substitution applied to letter outside domain");
    return images_[x];
  }
  const std::vector<Word>& images() const { return images_; }

  Word apply(const Word& w) const {
    Word out;
    for (Letter x : w) {
      const Word& im = image(x);
      out.insert(out.end(), im.begin(), im.end());
    }
    return out;
  }

  bool operator==(const Substitution& o) const {
    return domain_ == o.domain_ && codomain_ == o.codomain_ && images_ == o.images_;
  }

 private:
  Alphabet domain_, codomain_;
  std::vector<Word> images_;
};

/// (a . b)(x) = a(b(x)); requires a's domain to match b's codomain.
inline Substitution compose(const Substitution& a, const Substitution& b) {
  if (a.domain() != b.codomain())
    throw invalid_input("compose: inner codomain does not match outer domain");
  std::vector<Word> images;
  images.reserve(std::size_t(b.domain().size()));
  for (int x = 0; x < b.domain().size(); ++x) images.push_back(a.apply(b.image(Letter(x))));
  return Substitution(b.domain(), a.codomain(), std::move(images));
}

/// Entry (i, j) counts occurrences of codomain letter i in the image of
/// domain letter j, so columns are indexed by the domain.
inline IntMatrix transition_matrix(const Substitution& s) {
  IntMatrix m(std::size_t(s.codomain().size()), std::size_t(s.domain().size()));
  for (int j = 0; j < s.domain().size(); ++j)
    for (Letter x : s.image(Letter(j))) m.at(x, std::size_t(j)) += 1;
  return m;
}

/// 0 -> 0^(n+1) 1,  1 -> 0^n 1  on the two-letter alphabet; n >= 1.
inline Substitution sturmian_substitution(int n) {
  if (n < 1) throw invalid_input("sturmian parameter must be >= 1");
  Word im0(std::size_t(n + 1), Letter(0)), im1(std::size_t(n), Letter(0));
  im0.push_back(1);
  im1.push_back(1);
  return Substitution::square(2, {im0, im1});
}

/// A nonempty list of parameters n_i >= 1; the list stands for the sequence
/// that repeats its final entry forever.
struct SturmianParams {
  std::vector<int> entries;

  explicit SturmianParams(std::vector<int> e) : entries(std::move(e)) {
    if (entries.empty()) throw invalid_input("sturmian parameter list is empty");
    for (int n : entries)
      if (n < 1) throw invalid_input("sturmian parameters must be >= 1");
  }

  int at(std::size_t i) const { return i < entries.size() ? entries[i] : entries.back(); }
};

/// Two eventually-constant parameter sequences agree from some point on
/// exactly when their repeating entries coincide.
inline bool tails_equivalent(const SturmianParams& a, const SturmianParams& b) {
  return a.entries.back() == b.entries.back();
}

/// Letterwise cyclic shift x -> x + k (mod alphabet size).
inline Word cyclic_relabel(const Word& w, int k, const Alphabet& a) {
  Word out;
  out.reserve(w.size());
  const int n = a.size();
  int kk = ((k % n) + n) % n;
  for (Letter x : w) out.push_back(Letter((int(x) + kk) % n));
  return out;
}

/// The padded re-embedding built from a factor w: every letter i maps to
/// 0^mu . shift^i(w) . 0^mu where mu exceeds the maximal letter multiplicity
/// of w, making all images share length 2*mu + |w| and stay pairwise distinct.
struct SigmaEmbedding {
  Word w;             // the seed factor, after any relabelling
  int mu = 0;         // padding length
  int relabelPower = 0;  // cyclic shift applied to the ambient orbit before seeding
  Substitution sub;   // the induced square substitution
};

inline SigmaEmbedding sigma_w(const Word& w, const Alphabet& a) {
  if (w.empty()) throw invalid_input("sigma_w seed word is empty");
  check_word(w, a, "sigma_w seed");
  const int n = a.size();
  std::vector<int> count(std::size_t(n), 0);
  for (Letter x : w) ++count[x];
  const int mu = 1 + *std::max_element(count.begin(), count.end());
  std::vector<Word> images;
  images.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    Word im(std::size_t(mu), Letter(0));
    Word shifted = cyclic_relabel(w, i, a);
    im.insert(im.end(), shifted.begin(), shifted.end());
    im.insert(im.end(), std::size_t(mu), Letter(0));
    images.push_back(std::move(im));
  }
  return SigmaEmbedding{w, mu, 0, Substitution::square(n, std::move(images))};
}

/// Smallest k >= 0 such that letter 0 occurs in shift^k(orbit); the shift is
/// the same relabelling sigma_w images use, so seeds sampled from the shifted
/// orbit stay inside its language.
inline int relabel_power_for(const Word& orbit, const Alphabet& a) {
  if (orbit.empty()) throw invalid_input("orbit word is empty");
  check_word(orbit, a, "orbit word");
  const int n = a.size();
  int best = n;  // sentinel > any valid shift
  for (Letter x : orbit) best = std::min(best, (n - int(x)) % n);
  return best;
}

inline bool contains_factor(const Word& big, const Word& small) {
  return std::search(big.begin(), big.end(), small.begin(), small.end()) != big.end();
}

/// Brute-force search over every seed word w with 1 <= |w| <= maxSeedLen,
/// enumerated by length and then lexicographically, for one whose sigma_w
/// image of the sampled orbit contains `target` as a factor. The first hit --
/// the least witness in that order -- is returned, so the result is
/// deterministic and a parallel split of the seed space would merge to the
/// same answer.
inline std::optional<SigmaEmbedding> density_witness(const Word& target, const Word& orbit,
                                                     const Alphabet& a, int maxSeedLen) {
  if (target.empty()) throw invalid_input("density target is empty");
  check_word(target, a, "density target");
  if (orbit.empty()) throw invalid_input("orbit word is empty");
  check_word(orbit, a, "orbit word");
  if (maxSeedLen < 1) throw invalid_input("density seed length bound must be >= 1");
  const int n = a.size();
  for (int len = 1; len <= maxSeedLen; ++len) {
    Word w(std::size_t(len), Letter(0));
    for (;;) {
      SigmaEmbedding e = sigma_w(w, a);
      if (contains_factor(e.sub.apply(orbit), target)) return e;
      // advance w like an odometer; stop after the all-(n-1) word
      int i = len - 1;
      while (i >= 0 && int(w[std::size_t(i)]) == n - 1) {
        w[std::size_t(i)] = 0;
        --i;
      }
      if (i < 0) break;
      w[std::size_t(i)] = Letter(int(w[std::size_t(i)]) + 1);
    }
  }
  return std::nullopt;
}

}  // namespace flowknot::symbolic
