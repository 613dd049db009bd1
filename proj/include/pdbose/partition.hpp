#pragma once

// Integer partitions of the particle number and the counting formulas
// attached to them: standard / semistandard tableau counts and Kostka
// numbers. All counts are exact integers.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdbose {

class Partition {
public:
  Partition() = default;

  explicit Partition(std::vector<int> rows) : rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i] <= 0)
        throw std::invalid_argument("Partition: parts must be positive");
      if (i > 0 && rows_[i] > rows_[i - 1])
        throw std::invalid_argument("Partition: parts must be non-increasing");
    }
  }

  int num_rows() const { return static_cast<int>(rows_.size()); }
  int row(int r) const { return rows_[r]; }
  const std::vector<int>& rows() const { return rows_; }

  int n() const { return std::accumulate(rows_.begin(), rows_.end(), 0); }

  // Column lengths of the diagram (conjugate partition).
  std::vector<int> conjugate_rows() const {
    std::vector<int> cols(rows_.empty() ? 0 : rows_[0], 0);
    for (int r = 0; r < num_rows(); ++r)
      for (int c = 0; c < rows_[r]; ++c) cols[c]++;
    return cols;
  }

  // content(cell) = col - row, 0-based.
  int content(int r, int c) const { return c - r; }

  int hook_length(int r, int c, const std::vector<int>& cols) const {
    return (rows_[r] - c) + (cols[c] - r) - 1;
  }

  bool operator==(const Partition& o) const { return rows_ == o.rows_; }
  bool operator<(const Partition& o) const { return rows_ < o.rows_; }

  // Compact label like "4-2" or "2-1-1", usable in filenames.
  std::string label() const {
    std::string s;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i) s += '-';
      s += std::to_string(rows_[i]);
    }
    return s;
  }

private:
  std::vector<int> rows_;
};

// All partitions of N, lexicographically decreasing: (N) first, (1,...,1) last.
inline std::vector<Partition> enumerate_partitions(int N) {
  if (N < 1) throw std::invalid_argument("enumerate_partitions: N >= 1 required");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int maxpart) -> void {
    if (rem == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rem - p, p);
      cur.pop_back();
    }
  };
  rec(rec, N, N);
  return out;
}

// nu_lambda = N! / prod(hooks). Exact for N <= 20.
inline std::uint64_t count_standard_tableaux(const Partition& lam) {
  const int N = lam.n();
  if (N > 20) throw std::invalid_argument("count_standard_tableaux: N too large for 64-bit");
  const auto cols = lam.conjugate_rows();
  std::uint64_t nfact = 1;
  for (int i = 2; i <= N; ++i) nfact *= static_cast<std::uint64_t>(i);
  std::uint64_t denom = 1;
  for (int r = 0; r < lam.num_rows(); ++r)
    for (int c = 0; c < lam.row(r); ++c)
      denom *= static_cast<std::uint64_t>(lam.hook_length(r, c, cols));
  return nfact / denom;  // divides exactly
}

// d_lambda(L) via the hook content formula prod (L + content)/hook.
// Zero when the diagram has more than L rows. The running fraction is
// reduced with gcds each step so the 128-bit intermediate cannot overflow
// at the sizes used here.
inline std::uint64_t count_semistandard_tableaux(const Partition& lam, int L) {
  if (L < 1) throw std::invalid_argument("count_semistandard_tableaux: L >= 1 required");
  if (lam.num_rows() > L) return 0;
  const auto cols = lam.conjugate_rows();
  auto gcd128 = [](unsigned __int128 a, unsigned __int128 b) {
    while (b) { auto t = a % b; a = b; b = t; }
    return a;
  };
  unsigned __int128 num = 1, den = 1;
  for (int r = 0; r < lam.num_rows(); ++r)
    for (int c = 0; c < lam.row(r); ++c) {
      num *= static_cast<unsigned>(L + lam.content(r, c));
      den *= static_cast<unsigned>(lam.hook_length(r, c, cols));
      const auto g = gcd128(num, den);
      num /= g;
      den /= g;
    }
  if (den != 1) throw std::logic_error("count_semistandard_tableaux: non-integer result");
  return static_cast<std::uint64_t>(num);
}

// Kostka number: semistandard tableaux of shape lambda whose content is the
// given occupation list (count[i] copies of symbol i+1). Counted as chains of
// horizontal-strip additions, one strip per symbol.
inline std::uint64_t kostka_number(const Partition& lam, const std::vector<int>& occupations) {
  int total = 0;
  for (int c : occupations) {
    if (c < 0) throw std::invalid_argument("kostka_number: negative occupation");
    total += c;
  }
  if (total != lam.n()) throw std::invalid_argument("kostka_number: occupations must sum to N");

  const int nr = lam.num_rows();
  std::vector<int> shape(nr, 0);  // partial shape after each symbol
  auto strip_count = [&](auto&& self, int sym) -> std::uint64_t {
    if (sym == static_cast<int>(occupations.size())) {
      for (int r = 0; r < nr; ++r)
        if (shape[r] != lam.row(r)) return 0;
      return 1;
    }
    // add a horizontal strip of size occupations[sym]: choose per-row gains
    // g_r with shape[r]+g_r <= lam.row(r) and the strip condition
    // shape[r]+g_r <= shape[r-1] (no two new cells in one column).
    std::uint64_t acc = 0;
    std::vector<int> gain(nr, 0);
    auto place = [&](auto&& pl, int r, int rem) -> void {
      if (r == nr) {
        if (rem == 0) {
          for (int i = 0; i < nr; ++i) shape[i] += gain[i];
          acc += self(self, sym + 1);
          for (int i = 0; i < nr; ++i) shape[i] -= gain[i];
        }
        return;
      }
      int hi = lam.row(r) - shape[r];
      if (r > 0) hi = std::min(hi, shape[r - 1] - shape[r]);
      for (int g = std::min(hi, rem); g >= 0; --g) {
        gain[r] = g;
        pl(pl, r + 1, rem - g);
      }
      gain[r] = 0;
    };
    place(place, 0, occupations[sym]);
    return acc;
  };
  return strip_count(strip_count, 0);
}

}  // namespace pdbose
