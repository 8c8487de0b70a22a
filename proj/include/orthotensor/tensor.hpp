#pragma once

// Dense symmetric tensors of arbitrary order with full d^k storage.
//
// Layout: the first index varies fastest, i.e. the 0-based entry (i_1,...,i_k)
// lives at offset i_1 + i_2 d + ... + i_k d^(k-1). With this layout the
// m-mode unfolding (modes 1..m as rows) is a pure reinterpretation of the
// storage as a column-major d^m x d^(k-m) matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orthotensor {

using RealVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Guard on d^k; dense storage beyond this is not supported.
inline constexpr std::size_t kMaxEntries = 100'000'000;
inline constexpr int kMaxOrder = 16;

namespace detail {

inline std::size_t checked_pow(int base, int exponent)
{
    if (base < 1 || exponent < 0)
        throw std::invalid_argument("checked_pow: base must be >= 1 and exponent >= 0");
    std::size_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        result *= static_cast<std::size_t>(base);
        if (result > kMaxEntries)
            throw std::invalid_argument("tensor size d^k exceeds the dense storage limit of 1e8 entries");
    }
    return result;
}

using MultiIndex = std::array<int, kMaxOrder>;

inline void decode(std::size_t flat, int order, int dim, MultiIndex& idx)
{
    for (int j = 0; j < order; ++j) {
        idx[j] = static_cast<int>(flat % static_cast<std::size_t>(dim));
        flat /= static_cast<std::size_t>(dim);
    }
}

inline std::size_t encode(const MultiIndex& idx, int order, int dim)
{
    std::size_t flat = 0;
    for (int j = order - 1; j >= 0; --j)
        flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx[j]);
    return flat;
}

/// Offset of the sorted (non-decreasing) rearrangement of the entry at `flat`.
inline std::size_t sorted_offset(std::size_t flat, int order, int dim)
{
    MultiIndex idx{};
    decode(flat, order, dim, idx);
    std::sort(idx.begin(), idx.begin() + order);
    return encode(idx, order, dim);
}

} // namespace detail

class DenseSymmetricTensor
{
public:
    DenseSymmetricTensor(int order, int dim, std::vector<double> data)
        : order_(order), dim_(dim), data_(std::move(data))
    {
        if (order < 2 || order > kMaxOrder)
            throw std::invalid_argument("tensor order must be in [2, 16], got " + std::to_string(order));
        if (dim < 1)
            throw std::invalid_argument("tensor dimension must be >= 1, got " + std::to_string(dim));
        if (data_.size() != detail::checked_pow(dim, order))
            throw std::invalid_argument("tensor data length must equal d^k");
    }

    static DenseSymmetricTensor zeros(int order, int dim)
    {
        return {order, dim, std::vector<double>(detail::checked_pow(dim, order), 0.0)};
    }

    /// weight * u^{(x)k}
    static DenseSymmetricTensor rank_one(int order, double weight, const RealVector& u);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }

    /// 0-based multi-index access.
    double operator()(std::initializer_list<int> index) const { return data_[offset(index)]; }

    std::size_t offset(std::initializer_list<int> index) const
    {
        if (static_cast<int>(index.size()) != order_)
            throw std::invalid_argument("index arity must equal the tensor order");
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (int i : index) {
            if (i < 0 || i >= dim_)
                throw std::out_of_range("tensor index out of range");
            flat += static_cast<std::size_t>(i) * stride;
            stride *= static_cast<std::size_t>(dim_);
        }
        return flat;
    }

    /// Zero-copy view of the m-mode unfolding (d^m x d^(k-m), column-major).
    Eigen::Map<const DenseMatrix> unfold_view(int left_modes) const
    {
        if (left_modes < 1 || left_modes >= order_)
            throw std::invalid_argument("unfold: left_modes must satisfy 1 <= m < k");
        const auto rows = static_cast<Eigen::Index>(detail::checked_pow(dim_, left_modes));
        const auto cols = static_cast<Eigen::Index>(detail::checked_pow(dim_, order_ - left_modes));
        return {data_.data(), rows, cols};
    }

    Eigen::Map<const RealVector> as_vector() const
    {
        return {data_.data(), static_cast<Eigen::Index>(data_.size())};
    }

    double frobenius_norm() const { return as_vector().norm(); }

    /// Largest deviation between an entry and its sorted-index representative.
    double symmetry_defect() const
    {
        double worst = 0.0;
        for (std::size_t f = 0; f < data_.size(); ++f)
            worst = std::max(worst, std::abs(data_[f] - data_[detail::sorted_offset(f, order_, dim_)]));
        return worst;
    }

private:
    int order_;
    int dim_;
    std::vector<double> data_;
};

/// vec(u^{(x)m}) in the canonical layout; m = 0 yields the scalar 1.
inline RealVector kron_power(const RealVector& u, int m)
{
    RealVector out = RealVector::Ones(1);
    for (int p = 0; p < m; ++p) {
        RealVector next(out.size() * u.size());
        // New mode is the slowest-varying one.
        for (Eigen::Index j = 0; j < u.size(); ++j)
            next.segment(j * out.size(), out.size()) = u[j] * out;
        out.swap(next);
    }
    return out;
}

inline DenseSymmetricTensor DenseSymmetricTensor::rank_one(int order, double weight, const RealVector& u)
{
    if (u.size() < 1)
        throw std::invalid_argument("rank_one: vector must be non-empty");
    RealVector v = weight * kron_power(u, order);
    return {order, static_cast<int>(u.size()), std::vector<double>(v.data(), v.data() + v.size())};
}

inline DenseMatrix unfold(const DenseSymmetricTensor& t, int left_modes)
{
    return t.unfold_view(left_modes);
}

namespace detail {

inline void check_dim(const DenseSymmetricTensor& t, const RealVector& x, const char* what)
{
    if (x.size() != t.dim())
        throw std::invalid_argument(std::string(what) + ": vector dimension does not match tensor dimension");
}

/// Contracts the `count` slowest modes with u; returns the remaining d^(k-count) values.
inline RealVector contract_trailing(const DenseSymmetricTensor& t, const RealVector& u, int count)
{
    const auto d = static_cast<Eigen::Index>(t.dim());
    auto rows = static_cast<Eigen::Index>(t.size()) / d;
    RealVector cur = Eigen::Map<const DenseMatrix>(t.data().data(), rows, d) * u;
    for (int c = 1; c < count; ++c) {
        rows /= d;
        RealVector next = Eigen::Map<const DenseMatrix>(cur.data(), rows, d) * u;
        cur.swap(next);
    }
    return cur;
}

} // namespace detail

/// T(x, ..., x)
inline double multilinear_eval(const DenseSymmetricTensor& t, const RealVector& x)
{
    detail::check_dim(t, x, "multilinear_eval");
    return detail::contract_trailing(t, x, t.order() - 1).dot(x);
}

/// T(I, x, ..., x), a length-d vector.
inline RealVector contract_all_but_one(const DenseSymmetricTensor& t, const RealVector& x)
{
    detail::check_dim(t, x, "contract_all_but_one");
    return detail::contract_trailing(t, x, t.order() - 1);
}

/// M[p,q] = sum T[p,q,i_3..i_k] u_{i_3} ... u_{i_k}; requires k >= 3.
inline DenseMatrix contract_tail(const DenseSymmetricTensor& t, const RealVector& u)
{
    if (t.order() < 3)
        throw std::invalid_argument("contract_tail requires tensor order >= 3");
    detail::check_dim(t, u, "contract_tail");
    RealVector v = detail::contract_trailing(t, u, t.order() - 2);
    return Eigen::Map<const DenseMatrix>(v.data(), t.dim(), t.dim());
}

inline DenseSymmetricTensor add_rank1(const DenseSymmetricTensor& t, double weight, const RealVector& u)
{
    detail::check_dim(t, u, "add_rank1");
    std::vector<double> data(t.data().begin(), t.data().end());
    if (weight != 0.0) {
        Eigen::Map<RealVector>(data.data(), static_cast<Eigen::Index>(data.size())) += weight * kron_power(u, t.order());
    }
    return {t.order(), t.dim(), std::move(data)};
}

/// T - lambda * u^{(x)k}
inline DenseSymmetricTensor subtract_rank1(const DenseSymmetricTensor& t, double lambda, const RealVector& u)
{
    return add_rank1(t, -lambda, u);
}

inline double tensor_inner(const DenseSymmetricTensor& a, const DenseSymmetricTensor& b)
{
    if (a.order() != b.order() || a.dim() != b.dim())
        throw std::invalid_argument("tensor_inner: shape mismatch");
    return a.as_vector().dot(b.as_vector());
}

inline double frobenius_norm(const DenseSymmetricTensor& t) { return t.frobenius_norm(); }

/// Copies the value stored at each sorted multi-index onto all of its permutations.
inline DenseSymmetricTensor symmetrize(std::span<const double> raw, int order, int dim)
{
    if (raw.size() != detail::checked_pow(dim, order))
        throw std::invalid_argument("symmetrize: raw length must equal d^k");
    std::vector<double> out(raw.size());
    for (std::size_t f = 0; f < raw.size(); ++f)
        out[f] = raw[detail::sorted_offset(f, order, dim)];
    return {order, dim, std::move(out)};
}

struct SpectralNormOptions
{
    int restarts = 10;
    int iters = 100;
    std::uint64_t seed = 0;
};

/// Lower bound on sup_{|x|=1} |T(x,...,x)| from multi-start symmetric
/// higher-order power iteration. Every iterate is a valid witness, so the
/// largest value seen along all trajectories is returned.
inline double spectral_norm_lb(const DenseSymmetricTensor& t, int restarts, int iters, std::uint64_t seed)
{
    if (restarts < 1 || iters < 1)
        throw std::invalid_argument("spectral_norm_lb: restarts and iters must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double best = 0.0;
    for (int s = 0; s < restarts; ++s) {
        RealVector x(t.dim());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = normal(rng);
        x.normalize();
        double previous = -1.0;
        for (int it = 0; it < iters; ++it) {
            RealVector y = contract_all_but_one(t, x);
            const double value = std::abs(y.dot(x));
            best = std::max(best, value);
            const double norm = y.norm();
            if (norm == 0.0 || std::abs(value - previous) <= 1e-15 * std::max(1.0, value))
                break;
            previous = value;
            x = y / norm;
        }
        best = std::max(best, std::abs(multilinear_eval(t, x)));
    }
    return best;
}

inline double spectral_norm_lb(const DenseSymmetricTensor& t, const SpectralNormOptions& opts = {})
{
    return spectral_norm_lb(t, opts.restarts, opts.iters, opts.seed);
}

} // namespace orthotensor
