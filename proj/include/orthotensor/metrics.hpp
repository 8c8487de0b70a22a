#pragma once

#include "orthotensor/synth.hpp"
#include "orthotensor/tensor.hpp"
#include "orthotensor/tmhosvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace orthotensor {

/// min(|a - b|, |a + b|) for unit vectors.
inline double loss_vec(const RealVector& a, const RealVector& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("loss_vec: dimension mismatch");
    if (std::abs(a.norm() - 1.0) > 1e-9 || std::abs(b.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("loss_vec: inputs must be unit vectors");
    return std::min((a - b).norm(), (a + b).norm());
}

inline double loss_scalar(double a, double b) { return std::min(std::abs(a - b), std::abs(a + b)); }

/// Maximum-weight perfect matching on a square matrix (Hungarian algorithm,
/// shortest augmenting paths, O(n^3)). Returns assignment[row] = column.
inline std::vector<int> optimal_assignment(const DenseMatrix& weight)
{
    const int n = static_cast<int>(weight.rows());
    if (weight.cols() != n)
        throw std::invalid_argument("optimal_assignment: matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    // Minimize cost = -weight. Arrays are 1-based with 0 as the virtual column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0)
            assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
    return assignment;
}

struct MatchResult
{
    std::vector<int> permutation; ///< estimate index -> truth index, -1 if unmatched
    std::vector<double> per_factor_loss;
    std::vector<double> lambda_losses;
    double avg_loss = 0.0;
    double max_loss = 0.0;
    double avg_lambda_loss = 0.0;
    bool count_mismatch = false;
};

/// Pairs estimates with planted factors by maximizing sum |<u_hat_i, u_pi(i)>|.
/// When the counts differ only min(|estimates|, r) pairs are scored.
inline MatchResult match_and_score(const std::vector<FactorEstimate>& estimates, const GroundTruth& truth)
{
    MatchResult out;
    const int ne = static_cast<int>(estimates.size());
    const int nt = truth.rank();
    out.count_mismatch = ne != nt;
    const int n = std::max(ne, nt);
    if (n == 0)
        return out;

    DenseMatrix w = DenseMatrix::Zero(n, n);
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < nt; ++j)
            w(i, j) = std::abs(estimates[static_cast<std::size_t>(i)].u_hat.dot(truth.factors.col(j)));
    auto assignment = optimal_assignment(w);

    out.permutation.assign(static_cast<std::size_t>(ne), -1);
    for (int i = 0; i < ne; ++i) {
        const int j = assignment[static_cast<std::size_t>(i)];
        if (j >= nt)
            continue;
        const auto& e = estimates[static_cast<std::size_t>(i)];
        out.permutation[static_cast<std::size_t>(i)] = j;
        out.per_factor_loss.push_back(loss_vec(e.u_hat, truth.factors.col(j)));
        out.lambda_losses.push_back(loss_scalar(e.lambda_hat, truth.weights[static_cast<std::size_t>(j)]));
    }
    if (!out.per_factor_loss.empty()) {
        const auto m = static_cast<double>(out.per_factor_loss.size());
        out.avg_loss = std::accumulate(out.per_factor_loss.begin(), out.per_factor_loss.end(), 0.0) / m;
        out.max_loss = *std::max_element(out.per_factor_loss.begin(), out.per_factor_loss.end());
        out.avg_lambda_loss = std::accumulate(out.lambda_losses.begin(), out.lambda_losses.end(), 0.0) / m;
    }
    return out;
}

struct ResidualNorms
{
    double frob = 0.0;
    double spectral_lb = 0.0;
};

inline DenseSymmetricTensor residual_tensor(const DenseSymmetricTensor& t, const std::vector<FactorEstimate>& estimates)
{
    DenseSymmetricTensor res = t;
    for (const auto& e : estimates)
        res = subtract_rank1(res, e.lambda_hat, e.u_hat);
    return res;
}

/// Norms of T - sum lambda_hat_i u_hat_i^{(x)k}.
inline ResidualNorms residual_norms(const DenseSymmetricTensor& t, const std::vector<FactorEstimate>& estimates,
                                    SpectralNormOptions spectral = {10, 100, 0x5eedULL})
{
    auto res = residual_tensor(t, estimates);
    const double frob = res.frobenius_norm();
    return {frob, frob == 0.0 ? 0.0 : spectral_norm_lb(res, spectral)};
}

} // namespace orthotensor
