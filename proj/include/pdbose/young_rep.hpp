#pragma once

// Standard tableaux and Young's orthogonal representation of S_N.
// Matrices are assembled from the adjacent-transposition generators in
// Young-Yamanouchi form; they come out real, symmetric per generator, and
// orthogonal, which keeps every sector Hamiltonian downstream real symmetric.

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "partition.hpp"
#include "permutation.hpp"

namespace pdbose {

struct StandardTableau {
  Partition shape;
  std::vector<std::vector<int>> entries;  // values 1..N, rows of the diagram

  std::vector<int> row_word() const {
    std::vector<int> w;
    for (const auto& row : entries) w.insert(w.end(), row.begin(), row.end());
    return w;
  }

  // (row, col) of a value, 0-based.
  std::pair<int, int> cell_of(int value) const {
    for (int r = 0; r < static_cast<int>(entries.size()); ++r)
      for (int c = 0; c < static_cast<int>(entries[r].size()); ++c)
        if (entries[r][c] == value) return {r, c};
    throw std::logic_error("StandardTableau: value not found");
  }
};

// All standard tableaux of the shape, sorted ascending by row-reading word.
// The first entry is therefore the row-filled tableau; its index is the
// canonical "(1,1)" slot used for the projector unit.
inline std::vector<StandardTableau> enumerate_standard_tableaux(const Partition& lam) {
  const int N = lam.n();
  const int nr = lam.num_rows();
  std::vector<StandardTableau> out;
  std::vector<std::vector<int>> entries(nr);
  std::vector<int> fill(nr, 0);
  auto rec = [&](auto&& self, int v) -> void {
    if (v > N) {
      out.push_back({lam, entries});
      return;
    }
    for (int r = 0; r < nr; ++r) {
      if (fill[r] >= lam.row(r)) continue;
      if (r > 0 && fill[r] >= fill[r - 1]) continue;  // column would not increase
      entries[r].push_back(v);
      fill[r]++;
      self(self, v + 1);
      entries[r].pop_back();
      fill[r]--;
    }
  };
  rec(rec, 1);
  std::sort(out.begin(), out.end(), [](const StandardTableau& a, const StandardTableau& b) {
    return a.row_word() < b.row_word();
  });
  return out;
}

class OrthogonalRep {
public:
  explicit OrthogonalRep(const Partition& lam)
      : shape_(lam), N_(lam.n()), tabs_(enumerate_standard_tableaux(lam)) {
    dim_ = static_cast<int>(tabs_.size());
    std::map<std::vector<int>, int> index;
    for (int t = 0; t < dim_; ++t) index[tabs_[t].row_word()] = t;

    gens_.reserve(std::max(N_ - 1, 0));
    for (int k = 0; k < N_ - 1; ++k) {  // s_k swaps values k+1, k+2
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim_, dim_);
      for (int t = 0; t < dim_; ++t) {
        const auto [ra, ca] = tabs_[t].cell_of(k + 1);
        const auto [rb, cb] = tabs_[t].cell_of(k + 2);
        const int r = (cb - rb) - (ca - ra);  // signed axial distance
        M(t, t) = 1.0 / r;
        if (std::abs(r) >= 2) {
          auto swapped = tabs_[t].entries;
          swapped[ra][ca] = k + 2;
          swapped[rb][cb] = k + 1;
          StandardTableau tt{shape_, swapped};
          const int u = index.at(tt.row_word());
          M(t, u) = std::sqrt(1.0 - 1.0 / (static_cast<double>(r) * r));
        }
      }
      gens_.push_back(std::move(M));
    }
  }

  int dim() const { return dim_; }
  const Partition& shape() const { return shape_; }
  const std::vector<StandardTableau>& tableaux() const { return tabs_; }

  const Eigen::MatrixXd& transposition(int k) const {
    if (k < 0 || k >= N_ - 1) throw std::invalid_argument("OrthogonalRep: bad transposition index");
    return gens_[k];
  }

  Eigen::MatrixXd matrix(const Permutation& pi) const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim_, dim_);
    for (int k : pi.adjacent_word()) M = gens_[k] * M;
    return M;
  }

  // D(pi)_{11} in the canonical tableau order, via a row-vector sweep.
  double entry11(const Permutation& pi) const {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(dim_);
    r(0) = 1.0;
    const auto word = pi.adjacent_word();
    for (auto it = word.rbegin(); it != word.rend(); ++it) r = r * gens_[*it];
    return r(0);
  }

  double character(const Permutation& pi) const { return matrix(pi).trace(); }

private:
  Partition shape_;
  int N_ = 0;
  int dim_ = 0;
  std::vector<StandardTableau> tabs_;
  std::vector<Eigen::MatrixXd> gens_;
};

}  // namespace pdbose
