#pragma once

// Sampling of internal single-particle states. Two branches cover the
// distinguishability range: perturbations of one common state (near
// indistinguishable) and perturbations of orthonormal states (near
// distinguishable). Randomness comes from mt19937_64 through an explicit
// Box-Muller transform, so a (seed, branch, eps, s, N) tuple reproduces the
// same states on any standard library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace pdbose {

enum class SamplingBranch { NearIndistinguishable, NearDistinguishable };

inline const char* branch_name(SamplingBranch b) {
  return b == SamplingBranch::NearIndistinguishable ? "near_indistinguishable"
                                                    : "near_distinguishable";
}

class NormalGen {
public:
  explicit NormalGen(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = ((eng_() >> 11) + 1.0) * 0x1p-53;  // in (0, 1]
    const double u2 = (eng_() >> 11) * 0x1p-53;          // in [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_ = false;
};

struct InternalStates {
  Eigen::MatrixXcd phis;  // s x N, column i = |phi_i>, unit norm
  SamplingBranch branch = SamplingBranch::NearIndistinguishable;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

inline InternalStates sample_internal_states(SamplingBranch branch, double eps, int s, int N,
                                             std::uint64_t seed) {
  if (s < N)
    throw std::invalid_argument("sample_internal_states: internal dimension below particle count");
  if (eps <= 0 || N < 1) throw std::invalid_argument("sample_internal_states: eps > 0, N >= 1");

  NormalGen gauss(seed);
  const double sigma = std::sqrt(eps);
  InternalStates st{Eigen::MatrixXcd::Zero(s, N), branch, eps, seed};
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s);
    v(branch == SamplingBranch::NearIndistinguishable ? 0 : i) = 1.0;
    for (int k = 0; k < s; ++k) {
      const double re = sigma * gauss();
      const double im = sigma * gauss();
      v(k) += std::complex<double>(re, im);
    }
    st.phis.col(i) = v / v.norm();
  }
  return st;
}

// S_ij = <phi_i | phi_j>: Hermitian, unit diagonal, positive semidefinite.
inline Eigen::MatrixXcd gram_matrix(const InternalStates& st) {
  return st.phis.adjoint() * st.phis;
}

}  // namespace pdbose
