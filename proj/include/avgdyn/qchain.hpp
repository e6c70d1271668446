#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "avgdyn/graph.hpp"

namespace avgdyn {

inline constexpr int kQChainSizeCap = 64;

// Stationary probabilities of the two-walk chain on a d-regular graph,
// constant on the distance classes S0 / S1 / S+.
struct StationaryTriple {
    double mu0 = 0.0;
    double mu1 = 0.0;
    double mu_plus = 0.0;
    double gamma = 0.0;  // k(1+alpha) - (1-alpha)
    double ell = 0.0;    // 1 / (n (n (d gamma - 2 alpha k) + 2 (1-alpha)(d-k)))
    int n = 0, d = 0, k = 0;
    double alpha = 0.0;

    // n mu0 + n d mu1 + n (n-d-1) mu_plus; equals 1 up to rounding.
    double class_mass() const {
        return n * mu0 + static_cast<double>(n) * d * mu1 +
               static_cast<double>(n) * (n - d - 1) * mu_plus;
    }
};

// Closed form: mu0 = 2k(d-1)l, mu1 = (d-1) gamma l, mu+ = (d gamma - 2 alpha k) l.
StationaryTriple stationary_closed_form(int n, int d, int k, double alpha);

// Row-stochastic transition matrix of the ordered pair of correlated walks,
// indexed by x*n + y. Regular graphs only.
struct QMatrix {
    Eigen::MatrixXd q;  // n^2 x n^2
    int n = 0, d = 0, k = 0;
    double alpha = 0.0;

    int index(int x, int y) const { return x * n + y; }
};

QMatrix build_q_matrix(const Graph& g, int k, double alpha);

// Dense stationary solve of mu Q = mu, sum mu = 1: the last column of (Q - I)
// is replaced by ones and the transposed system is solved against e_last.
Eigen::VectorXd solve_stationary_numeric(const QMatrix& qm);

struct StationaryReport {
    double closed_form_residual = 0.0;  // || mu_cf Q - mu_cf ||_inf
    double sum_error = 0.0;             // | sum mu_cf - 1 |
    double numeric_residual = 0.0;      // || mu_num Q - mu_num ||_inf
    double class_spread = 0.0;          // max intra-class spread of numeric mu
    double class_agreement = 0.0;       // max | numeric - closed form | over pairs
    StationaryTriple triple;
};

// Builds Q, evaluates the closed form on every ordered pair via the distance
// classes and mechanises the stationarity check.
StationaryReport verify_stationary(const Graph& g, int k, double alpha);

// Empirical class occupancy of one simulated correlated pair. Events are
// drawn with the same node/k-subset sampling as the averaging dynamics; both
// walks start at node 0. Standard errors come from batch means over
// `batches` equal slices of the sample window.
struct TwoWalkOccupancy {
    std::array<double, 3> freq{};  // fraction of samples in S0, S1, S+
    std::array<double, 3> se{};
    long long burn_in = 0;
    long long samples = 0;
};

TwoWalkOccupancy two_walk_class_occupancy(const Graph& g, int k, double alpha, long long burn_in,
                                          long long samples, std::uint64_t seed,
                                          int batches = 1000);

}  // namespace avgdyn
