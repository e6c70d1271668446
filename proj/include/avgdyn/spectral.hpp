#pragma once

#include <vector>

#include "avgdyn/graph.hpp"

namespace avgdyn {

inline constexpr int kSpectralSizeCap = 4096;

// Spectral quantities of the lazy walk matrix P (p_ii = 1/2, p_ij = 1/(2 d_i))
// and of the Laplacian L = D - A.
struct SpectralSummary {
    double lambda2_P = 0.0;      // second-largest eigenvalue of P, in [0,1)
    double lambda2_L = 0.0;      // second-smallest eigenvalue of L, > 0
    std::vector<double> pi;      // d_u / 2m
    std::vector<double> f2_P;    // P f = lambda2_P f, <f,f>_pi = 1, <1,f>_pi = 0
    std::vector<double> f2_L;    // L f = lambda2_L f, ||f||_2 = 1, sum f = 0
};

// Dense symmetric eigensolve; P is symmetrised as D^{1/2} P D^{-1/2}.
// Throws GraphErrorKind::size_cap for n > kSpectralSizeCap.
SpectralSummary spectral(const Graph& g);

}  // namespace avgdyn
