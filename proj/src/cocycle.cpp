#include "ce2/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace ce2 {

const char* to_string(HsVerdict v) {
  switch (v) {
    case HsVerdict::converged: return "converged";
    case HsVerdict::diverging: return "diverging";
    case HsVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Ratio test on the anti-diagonal masses a_k = S_k - S_{k-1}. The rate is
// read off two adjacent blocks at the end of the profile so that parity
// effects along anti-diagonals average out.
ProfileDiagnosis classify_profile(const std::vector<double>& S) {
  ProfileDiagnosis d;
  const int K = static_cast<int>(S.size()) - 1;
  if (K < 0) return d;
  const double total = S.back();
  if (total <= 1e-24) {
    d.verdict = HsVerdict::converged;
    return d;
  }
  if (K < 8) return d;

  auto mass = [&](int lo, int hi) { return S[hi] - (lo > 0 ? S[lo - 1] : 0.0); };
  const int w = std::max(2, K / 8);
  const double last = mass(K - w + 1, K);
  const double prev = mass(K - 2 * w + 1, K - w);

  if (last <= 1e-15 * total) {
    d.verdict = HsVerdict::converged;
    d.ratio = prev > 0.0 ? std::pow(std::max(last, 0.0) / prev, 1.0 / w) : 0.0;
    d.tail_estimate = last;
    return d;
  }
  d.ratio = prev > 0.0 ? std::pow(last / prev, 1.0 / w) : 1.0;
  const double per_step = last / w;
  d.tail_estimate = d.ratio < 1.0 ? per_step * d.ratio / (1.0 - d.ratio) : INFINITY;

  if (d.ratio < 0.95 && d.tail_estimate <= 1e-3 * total) {
    d.verdict = HsVerdict::converged;
  } else if (d.ratio >= 0.9) {
    // Cauchy gaps S_K - S_{K/2} that barely shrink against S_{K/2} - S_{K/4}.
    const double g1 = S[K] - S[K / 2];
    const double g0 = S[K / 2] - S[K / 4];
    if (g1 >= 0.75 * g0) d.verdict = HsVerdict::diverging;
  }
  return d;
}

}  // namespace ce2
