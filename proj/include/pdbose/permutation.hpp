#pragma once

// Permutations of {0..N-1} in one-line notation: perm[i] = pi(i).
// Composition is (pi*sigma)(x) = pi(sigma(x)).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pdbose {

class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<int> im) : im_(std::move(im)) {
    std::vector<char> seen(im_.size(), 0);
    for (int v : im_) {
      if (v < 0 || v >= static_cast<int>(im_.size()) || seen[v])
        throw std::invalid_argument("Permutation: not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  static Permutation transposition(int n, int k) {  // swaps k, k+1
    auto p = identity(n);
    std::swap(p.im_[k], p.im_[k + 1]);
    return p;
  }

  int size() const { return static_cast<int>(im_.size()); }
  int operator()(int i) const { return im_[i]; }
  const std::vector<int>& one_line() const { return im_; }

  Permutation inverse() const {
    std::vector<int> inv(im_.size());
    for (int i = 0; i < size(); ++i) inv[im_[i]] = i;
    return Permutation(std::move(inv));
  }

  // this * other, acting right-to-left.
  Permutation compose(const Permutation& other) const {
    std::vector<int> im(im_.size());
    for (int i = 0; i < size(); ++i) im[i] = im_[other.im_[i]];
    return Permutation(std::move(im));
  }

  bool operator==(const Permutation& o) const { return im_ == o.im_; }

  // Adjacent-transposition word: pi = s[w.back()] * ... * s[w.front()].
  // Obtained by bubble-sorting the one-line notation (each swap at position j
  // is a right-multiplication by s_j).
  std::vector<int> adjacent_word() const {
    std::vector<int> arr = im_, word;
    bool moved = true;
    while (moved) {
      moved = false;
      for (int j = 0; j + 1 < size(); ++j)
        if (arr[j] > arr[j + 1]) {
          std::swap(arr[j], arr[j + 1]);
          word.push_back(j);
          moved = true;
        }
    }
    return word;
  }

private:
  std::vector<int> im_;
};

// All N! permutations in lexicographic order of one-line notation.
// Identity first. N <= 10 guard keeps sizes sane.
inline std::vector<Permutation> enumerate_permutations(int N) {
  if (N < 1 || N > 10) throw std::invalid_argument("enumerate_permutations: 1 <= N <= 10");
  std::vector<int> im(N);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace pdbose
