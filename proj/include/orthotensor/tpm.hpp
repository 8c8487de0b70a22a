#pragma once

// Robust tensor power method baseline: random restarts, order-k power step
// x <- T(I, x, ..., x) / |T(I, x, ..., x)|, and tensor deflation.

#include "orthotensor/linalg.hpp"
#include "orthotensor/tensor.hpp"
#include "orthotensor/tmhosvd.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace orthotensor {

struct TpmOptions
{
    int restarts = 10;
    int iters = 100;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

/// One power step; nullopt when the contraction vanishes (caller restarts).
inline std::optional<RealVector> tpm_power_step(const DenseSymmetricTensor& t, const RealVector& x)
{
    RealVector y = contract_all_but_one(t, x);
    const double norm = y.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        return std::nullopt;
    return RealVector(y / norm);
}

inline std::vector<FactorEstimate> tpm_decompose(const DenseSymmetricTensor& t, int r, const TpmOptions& opts = {})
{
    if (r < 1)
        throw std::invalid_argument("tpm_decompose: r must be >= 1");
    if (opts.restarts < 1 || opts.iters < 1)
        throw std::invalid_argument("tpm_decompose: restarts and iters must be >= 1");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    auto random_unit = [&] {
        RealVector x(t.dim());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = normal(rng);
        const double n = x.norm();
        return n > 0.0 ? RealVector(x / n) : RealVector(RealVector::Unit(t.dim(), 0));
    };

    std::vector<FactorEstimate> out;
    DenseSymmetricTensor residual = t;
    for (int round = 0; round < r; ++round) {
        FactorEstimate best;
        best.iteration = round + 1;
        best.u_hat = RealVector::Unit(t.dim(), 0);
        double best_score = -1.0;
        for (int restart = 0; restart < opts.restarts; ++restart) {
            RealVector x = random_unit();
            int used = 0;
            bool converged = false;
            for (int it = 1; it <= opts.iters; ++it) {
                auto next = tpm_power_step(residual, x);
                if (!next)
                    break;
                used = it;
                // Sign-invariant step size, since odd orders may alternate.
                const double change = std::min((*next - x).norm(), (*next + x).norm());
                x = std::move(*next);
                if (change < opts.tol) {
                    converged = true;
                    break;
                }
            }
            const double score = std::abs(multilinear_eval(residual, x));
            if (score > best_score) {
                best_score = score;
                best.u_hat = x;
                best.ascent_iters = used;
                best.converged = converged;
            }
        }
        canonicalize_sign(best.u_hat);
        best.lambda_hat = multilinear_eval(residual, best.u_hat);
        best.objective = std::abs(best.lambda_hat);
        residual = subtract_rank1(residual, best.lambda_hat, best.u_hat);
        out.push_back(std::move(best));
    }
    return out;
}

} // namespace orthotensor
