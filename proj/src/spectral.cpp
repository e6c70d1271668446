#include "avgdyn/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace avgdyn {

namespace {

// Deterministic sign convention: largest-magnitude entry positive.
void fix_sign(Eigen::VectorXd& v) {
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
}

}  // namespace

SpectralSummary spectral(const Graph& g) {
    const int n = g.n();
    if (n > kSpectralSizeCap)
        throw GraphError(GraphErrorKind::size_cap,
                         "dense spectral solve capped at n = " + std::to_string(kSpectralSizeCap));

    Eigen::VectorXd sqrt_deg(n);
    for (int u = 0; u < n; ++u) sqrt_deg[u] = std::sqrt(static_cast<double>(g.degree(u)));

    // N = D^{1/2} P D^{-1/2} with P the lazy walk matrix; N is symmetric and
    // shares eigenvalues with P. N_ij = 1/(2 sqrt(d_i d_j)) for edges, 1/2 diag.
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        sym(u, u) = 0.5;
        lap(u, u) = static_cast<double>(g.degree(u));
        for (int v : g.neighbours(u)) {
            sym(u, v) = 0.5 / (sqrt_deg[u] * sqrt_deg[v]);
            lap(u, v) = -1.0;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> walk_solver(sym);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lap_solver(lap);
    if (walk_solver.info() != Eigen::Success || lap_solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");

    SpectralSummary out;
    out.pi = g.stationary_pi();
    out.lambda2_P = walk_solver.eigenvalues()[n - 2];
    out.lambda2_L = lap_solver.eigenvalues()[1];

    // f2(P) = sqrt(2m) D^{-1/2} g2 has <f,f>_pi = 1 and is pi-orthogonal to 1.
    Eigen::VectorXd g2 = walk_solver.eigenvectors().col(n - 2);
    fix_sign(g2);
    const double scale = std::sqrt(2.0 * static_cast<double>(g.m()));
    out.f2_P.resize(n);
    for (int u = 0; u < n; ++u) out.f2_P[u] = scale * g2[u] / sqrt_deg[u];

    Eigen::VectorXd h2 = lap_solver.eigenvectors().col(1);
    fix_sign(h2);
    out.f2_L.assign(h2.data(), h2.data() + n);
    return out;
}

}  // namespace avgdyn
