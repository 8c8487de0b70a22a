#pragma once

// Planted nearly-SOD instances: T = sum_i lambda_i u_i^{(x)k} + E with
// lambda_i ~ Unif[0.8, 1.2] and symmetric noise drawn at sorted indices.
//
// Randomness: std::mt19937_64 streams. An instance seed derives independent
// sub-seeds (weights, factors, noise, spectral estimate) through splitmix64.

#include "orthotensor/linalg.hpp"
#include "orthotensor/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orthotensor {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace streams {
inline constexpr std::uint64_t weights = 1;
inline constexpr std::uint64_t factors = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t spectral = 4;
inline constexpr std::uint64_t tpm = 5;
} // namespace streams

enum class NoiseModel { gaussian, bernoulli, student_t };
enum class FactorMode { canonical, random_orthonormal };

inline std::string to_string(NoiseModel m)
{
    switch (m) {
    case NoiseModel::gaussian: return "gaussian";
    case NoiseModel::bernoulli: return "bernoulli";
    case NoiseModel::student_t: return "student_t";
    }
    return "unknown";
}

inline std::string to_string(FactorMode m)
{
    return m == FactorMode::canonical ? "canonical" : "random_orthonormal";
}

inline NoiseModel parse_noise_model(std::string_view s)
{
    if (s == "gaussian") return NoiseModel::gaussian;
    if (s == "bernoulli") return NoiseModel::bernoulli;
    if (s == "student_t" || s == "t") return NoiseModel::student_t;
    throw std::invalid_argument("unknown noise model '" + std::string(s) + "'");
}

inline FactorMode parse_factor_mode(std::string_view s)
{
    if (s == "canonical") return FactorMode::canonical;
    if (s == "random_orthonormal" || s == "random") return FactorMode::random_orthonormal;
    throw std::invalid_argument("unknown factor mode '" + std::string(s) + "'");
}

struct GroundTruth
{
    DenseMatrix factors;          ///< d x r, orthonormal columns u_i
    std::vector<double> weights;  ///< lambda_i > 0
    int rank() const noexcept { return static_cast<int>(weights.size()); }
    RealVector factor(int i) const { return factors.col(i); }
};

struct NoiseSpec
{
    NoiseModel model = NoiseModel::gaussian;
    double sigma = 0.0;
    int df = 5;

    void validate() const
    {
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("noise sigma must be finite and >= 0");
        if (model == NoiseModel::student_t && df != 5)
            throw std::invalid_argument("student_t noise uses 5 degrees of freedom");
    }
};

struct Instance
{
    DenseSymmetricTensor tensor; ///< signal + noise
    DenseSymmetricTensor noise;
    GroundTruth truth;
    NoiseSpec spec;
    double noise_frob = 0.0;
    double noise_spectral_lb = 0.0;
    std::uint64_t seed = 0;
};

inline GroundTruth gen_truth(int d, int k, int r, FactorMode mode, std::uint64_t seed)
{
    if (d < 1 || k < 2)
        throw std::invalid_argument("gen_truth: need d >= 1 and k >= 2");
    if (r < 1 || r > d)
        throw std::invalid_argument("gen_truth: r must satisfy 1 <= r <= d");

    GroundTruth truth;
    std::mt19937_64 wrng(derive_seed(seed, streams::weights));
    std::uniform_real_distribution<double> unif(0.8, 1.2);
    truth.weights.resize(static_cast<std::size_t>(r));
    for (auto& w : truth.weights)
        w = unif(wrng);

    if (mode == FactorMode::canonical) {
        truth.factors = DenseMatrix::Identity(d, r);
    } else {
        std::mt19937_64 frng(derive_seed(seed, streams::factors));
        std::normal_distribution<double> normal;
        DenseMatrix g(d, r);
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index i = 0; i < d; ++i)
                g(i, j) = normal(frng);
        Eigen::HouseholderQR<DenseMatrix> qr(g);
        truth.factors = qr.householderQ() * DenseMatrix::Identity(d, r);
        // Re-orthonormalize once to push the Gram matrix to machine precision.
        std::vector<RealVector> cols;
        for (Eigen::Index j = 0; j < r; ++j)
            cols.push_back(truth.factors.col(j));
        auto q = orthonormalize(cols);
        for (Eigen::Index j = 0; j < r; ++j)
            truth.factors.col(j) = q[static_cast<std::size_t>(j)];
    }
    return truth;
}

/// Symmetric noise: i.i.d. draws at sorted multi-indices (enumerated in
/// increasing storage order), copied to every permutation.
inline DenseSymmetricTensor gen_noise(int d, int k, const NoiseSpec& spec, std::uint64_t seed)
{
    spec.validate();
    const std::size_t n = detail::checked_pow(d, k);
    std::vector<double> raw(n, 0.0);
    if (spec.sigma == 0.0)
        return {k, d, std::move(raw)};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::chi_squared_distribution<double> chi2(static_cast<double>(spec.df));
    std::bernoulli_distribution coin(0.5);

    detail::MultiIndex idx{};
    for (std::size_t f = 0; f < n; ++f) {
        detail::decode(f, k, d, idx);
        if (!std::is_sorted(idx.begin(), idx.begin() + k))
            continue;
        double value = 0.0;
        switch (spec.model) {
        case NoiseModel::gaussian:
            value = spec.sigma * normal(rng);
            break;
        case NoiseModel::bernoulli:
            value = coin(rng) ? spec.sigma : -spec.sigma;
            break;
        case NoiseModel::student_t: {
            const double z = normal(rng);
            const double v = chi2(rng);
            value = spec.sigma * z / std::sqrt(v / spec.df);
            break;
        }
        }
        raw[f] = value;
    }
    return symmetrize(raw, k, d);
}

inline DenseSymmetricTensor signal_tensor(const GroundTruth& truth, int k)
{
    auto t = DenseSymmetricTensor::zeros(k, static_cast<int>(truth.factors.rows()));
    for (int i = 0; i < truth.rank(); ++i)
        t = add_rank1(t, truth.weights[static_cast<std::size_t>(i)], truth.factor(i));
    return t;
}

inline Instance gen_instance(int d, int k, int r, const NoiseSpec& spec, FactorMode mode, std::uint64_t seed,
                             SpectralNormOptions spectral = {})
{
    auto truth = gen_truth(d, k, r, mode, seed);
    auto noise = gen_noise(d, k, spec, derive_seed(seed, streams::noise));
    auto signal = signal_tensor(truth, k);

    std::vector<double> sum(signal.data().begin(), signal.data().end());
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum[i] += noise.data()[i];

    spectral.seed = derive_seed(seed, streams::spectral);
    const double frob = noise.frobenius_norm();
    const double spec_lb = frob == 0.0 ? 0.0 : spectral_norm_lb(noise, spectral);
    return Instance{DenseSymmetricTensor(k, d, std::move(sum)), std::move(noise), std::move(truth), spec,
                    frob, spec_lb, seed};
}

} // namespace orthotensor
