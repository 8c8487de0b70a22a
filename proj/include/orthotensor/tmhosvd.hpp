#pragma once

// Two-mode HOSVD decomposition of nearly orthogonally decomposable symmetric
// tensors:
//
//   1. top-r left singular space of the d^2 x d^(k-2) unfolding,
//   2. nearly rank-1 matrix pursuit in that space by coordinate ascent,
//   3. refinement through the tail contraction T(I, I, u, ..., u),
//   4. deflation of the singular space by vec(u u^T).

#include "orthotensor/errors.hpp"
#include "orthotensor/linalg.hpp"
#include "orthotensor/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthotensor {

/// Orthonormal basis of (a deflated) two-mode left singular space. Columns
/// are vec'd d x d matrices.
struct SingularSpaceBasis
{
    DenseMatrix basis;                   ///< d^2 x s
    std::vector<double> singular_values; ///< mu_1..mu_r of the original unfolding
    double next_singular_value = 0.0;    ///< mu_{r+1}
    int dim = 0;
    std::vector<std::string> diagnostics;

    int active() const noexcept { return static_cast<int>(basis.cols()); }

    DenseMatrix mat(int j) const { return Eigen::Map<const DenseMatrix>(basis.col(j).data(), dim, dim); }

    /// mu_r - mu_{r+1}; positive means the r-truncated space is unique.
    double uniqueness_gap() const
    {
        return singular_values.empty() ? 0.0 : singular_values.back() - next_singular_value;
    }
};

struct AscentState
{
    RealVector x;
    RealVector alpha;
    double objective = 0.0;
};

struct PursuitResult
{
    AscentState state;
    DenseMatrix m_hat;   ///< M(alpha), unit Frobenius norm
    RealVector u_hat;    ///< dominant eigenvector of m_hat
    int iterations = 0;
    bool converged = false;
    int init_index = 0;  ///< basis position the successful run started from
    std::vector<double> trace; ///< objective after every half-step
};

struct FactorEstimate
{
    RealVector u_hat;
    double lambda_hat = 0.0;
    double objective = 0.0; ///< spectral norm of the pursued matrix, before refinement
    int iteration = 0;      ///< 1-based extraction order
    int ascent_iters = 0;
    bool converged = false;
};

struct PursuitOptions
{
    double tol = 1e-10;
    int max_iters = 500;
    SvdMethod svd_method = SvdMethod::automatic;
    /// singular values below rank_tol * mu_1 count as numerically zero
    double rank_tol = 1e-10;
};

struct Decomposition
{
    std::vector<FactorEstimate> factors;
    std::vector<double> singular_values;
    double next_singular_value = 0.0;
    int detected_rank = 0;
    std::vector<std::string> warnings;
};

struct SnrDiagnostics
{
    double eps_frob_ub = 0.0;
    double eps_spectral_lb = 0.0;
    double lambda_min = 0.0;
    double c0 = 10.0;
    double threshold = 0.0;      ///< lambda_min / (c0 d^((k-2)/2))
    double required_c0 = 10.0;   ///< max(10, 3(k-2)/2 + 6 lambda_max / lambda_min)
    bool satisfied = false;      ///< eps_frob_ub <= threshold (rigorous)
    bool satisfied_estimate = false; ///< eps_spectral_lb <= threshold
};

inline SnrDiagnostics snr_diagnostics(int order, int dim, double lambda_min, double lambda_max,
                                      double eps_frob_ub, double eps_spectral_lb, double c0 = 10.0)
{
    SnrDiagnostics out;
    out.eps_frob_ub = eps_frob_ub;
    out.eps_spectral_lb = eps_spectral_lb;
    out.lambda_min = lambda_min;
    out.c0 = c0;
    out.threshold = lambda_min / (c0 * std::pow(static_cast<double>(dim), 0.5 * (order - 2)));
    out.required_c0 = std::max(10.0, 1.5 * (order - 2) + 6.0 * lambda_max / lambda_min);
    out.satisfied = eps_frob_ub <= out.threshold;
    out.satisfied_estimate = eps_spectral_lb <= out.threshold;
    return out;
}

namespace detail {

inline void require_two_mode(const DenseSymmetricTensor& t, int r, const char* what)
{
    if (t.order() < 3)
        throw std::invalid_argument(std::string(what) + ": tensor order must be >= 3");
    const auto rows = static_cast<long long>(detail::checked_pow(t.dim(), 2));
    const auto cols = static_cast<long long>(detail::checked_pow(t.dim(), t.order() - 2));
    if (r < 1 || r > std::min(rows, cols))
        throw std::invalid_argument(std::string(what) + ": r must satisfy 1 <= r <= min(d^2, d^(k-2))");
}

inline DenseMatrix combine(const SingularSpaceBasis& space, const RealVector& alpha)
{
    RealVector v = space.basis * alpha;
    return Eigen::Map<const DenseMatrix>(v.data(), space.dim, space.dim);
}

} // namespace detail

inline SingularSpaceBasis singular_space(const DenseSymmetricTensor& t, int r,
                                         SvdMethod method = SvdMethod::automatic)
{
    detail::require_two_mode(t, r, "singular_space");
    auto svd = truncated_left_svd(t.unfold_view(2), r, method);
    SingularSpaceBasis out;
    out.basis = std::move(svd.left_vectors);
    out.singular_values = std::move(svd.singular_values);
    out.next_singular_value = svd.gap_next;
    out.dim = t.dim();
    return out;
}

/// Coordinate ascent on H(x, alpha) = x^T [sum_j alpha_j Mat(a_j)] x over the
/// unit spheres, starting from alpha = e_{init_index} (0-based). Restarts from
/// the next basis position on a degenerate alpha update.
inline PursuitResult pursue_rank1(const SingularSpaceBasis& space, int init_index, double tol, int max_iters)
{
    const int s = space.active();
    if (s < 1)
        throw std::invalid_argument("pursue_rank1: singular space is empty");
    if (init_index < 0 || init_index >= s)
        throw std::invalid_argument("pursue_rank1: init_index out of range");
    if (!(tol > 0.0))
        throw std::invalid_argument("pursue_rank1: tol must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("pursue_rank1: max_iters must be >= 1");

    if (s == 1) {
        PursuitResult out;
        out.state.alpha = RealVector::Ones(1);
        out.m_hat = space.mat(0);
        auto eig = top_eig_abs(out.m_hat);
        out.u_hat = eig.vector;
        out.state.x = eig.vector;
        out.state.objective = std::abs(eig.value);
        out.trace = {out.state.objective};
        out.converged = true;
        return out;
    }

    for (int attempt = 0; attempt < s; ++attempt) {
        const int start = (init_index + attempt) % s;
        PursuitResult out;
        out.init_index = start;
        RealVector alpha = RealVector::Unit(s, start);
        double last = -std::numeric_limits<double>::infinity();
        bool degenerate = false;

        for (int it = 1; it <= max_iters; ++it) {
            auto eig = top_eig_abs(detail::combine(space, alpha));
            out.trace.push_back(std::abs(eig.value));
            // alpha_j = x^T Mat(a_j) x = <a_j, vec(x x^T)>
            RealVector g = space.basis.transpose() * kron_power(eig.vector, 2);
            const double gain = g.norm();
            if (gain < 1e-14) {
                degenerate = true;
                break;
            }
            alpha = g / gain;
            out.trace.push_back(gain);
            out.iterations = it;
            if (gain - last < tol) {
                out.converged = true;
                break;
            }
            last = gain;
        }
        if (degenerate)
            continue;

        out.m_hat = detail::combine(space, alpha);
        auto eig = top_eig_abs(out.m_hat);
        out.u_hat = eig.vector;
        out.state = {eig.vector, alpha, std::abs(eig.value)};
        return out;
    }
    throw pursuit_exhausted("pursue_rank1: every initialization produced a degenerate update");
}

struct RefinedFactor
{
    RealVector u;
    double lambda = 0.0;
};

/// u <- top eigenvector of T(I, I, u, ..., u); lambda <- T(u, ..., u).
inline RefinedFactor postprocess(const DenseSymmetricTensor& t, const RealVector& u_hat)
{
    auto eig = top_eig_abs(contract_tail(t, u_hat));
    RefinedFactor out{eig.vector, 0.0};
    out.lambda = multilinear_eval(t, out.u);
    return out;
}

/// Restricts the space to its intersection with vec(u u^T)^perp.
///
/// vec(u u^T) is first projected onto the current span; the basis vector with
/// the largest coefficient is dropped and the rest are projected off the
/// projected direction and re-orthonormalized. When vec(u u^T) lies in the
/// span this is exactly a_j <- a_j - <v, a_j> v.
inline SingularSpaceBasis deflate(const SingularSpaceBasis& space, const RealVector& u_hat)
{
    if (u_hat.size() != space.dim)
        throw std::invalid_argument("deflate: vector dimension does not match the space");
    SingularSpaceBasis out = space;
    const int s = space.active();
    if (s == 0)
        return out;

    const RealVector v = kron_power(u_hat, 2);
    const RealVector c = space.basis.transpose() * v;
    const double cn = c.norm();
    if (cn < 1e-10) {
        out.diagnostics.push_back("deflate: vec(u u^T) is orthogonal to the space; no basis vector dropped");
        return out;
    }

    Eigen::Index drop = 0;
    c.cwiseAbs().maxCoeff(&drop);
    const RealVector w = space.basis * c / cn;

    std::vector<RealVector> kept;
    kept.reserve(static_cast<std::size_t>(s - 1));
    for (int j = 0; j < s; ++j) {
        if (j == drop)
            continue;
        kept.push_back(space.basis.col(j) - (c[j] / cn) * w);
    }
    auto ortho = orthonormalize(kept);
    if (static_cast<int>(ortho.size()) != s - 1)
        out.diagnostics.push_back("deflate: re-orthonormalization dropped additional vectors");

    out.basis.resize(space.basis.rows(), static_cast<Eigen::Index>(ortho.size()));
    for (std::size_t j = 0; j < ortho.size(); ++j)
        out.basis.col(static_cast<Eigen::Index>(j)) = ortho[j];
    return out;
}

inline Decomposition decompose(const DenseSymmetricTensor& t, int r, const PursuitOptions& opts = {})
{
    detail::require_two_mode(t, r, "decompose");
    Decomposition out;
    auto space = singular_space(t, r, opts.svd_method);
    out.singular_values = space.singular_values;
    out.next_singular_value = space.next_singular_value;

    const double mu1 = space.singular_values.front();
    for (double mu : space.singular_values)
        if (mu1 > 0.0 && mu >= opts.rank_tol * mu1)
            ++out.detected_rank;
    if (out.detected_rank < r)
        out.warnings.push_back("decompose: requested r = " + std::to_string(r)
                               + " exceeds the detected two-mode rank " + std::to_string(out.detected_rank));

    auto placeholder = [&](int iteration) {
        FactorEstimate f;
        f.u_hat = RealVector::Unit(t.dim(), 0);
        f.lambda_hat = 0.0;
        f.objective = 0.0;
        f.iteration = iteration;
        f.converged = false;
        return f;
    };

    for (int i = 0; i < r; ++i) {
        const bool beyond_rank = i >= out.detected_rank;
        if (out.detected_rank == 0 || space.active() == 0) {
            out.factors.push_back(placeholder(i + 1));
            continue;
        }
        PursuitResult pursuit;
        try {
            // The deflated basis keeps the surviving singular vectors in their
            // original order, so position 0 plays the role of a_i.
            pursuit = pursue_rank1(space, 0, opts.tol, opts.max_iters);
        } catch (const pursuit_exhausted&) {
            if (!beyond_rank)
                throw;
            out.factors.push_back(placeholder(i + 1));
            continue;
        }
        auto refined = postprocess(t, pursuit.u_hat);

        FactorEstimate f;
        f.u_hat = refined.u;
        f.lambda_hat = refined.lambda;
        f.objective = pursuit.state.objective;
        f.iteration = i + 1;
        f.ascent_iters = pursuit.iterations;
        f.converged = pursuit.converged && !beyond_rank;
        out.factors.push_back(std::move(f));

        space = deflate(space, refined.u);
    }
    for (auto& d : space.diagnostics)
        out.warnings.push_back(std::move(d));
    return out;
}

/// True iff vec(a a^T) is an eigenvector of G = U U^T (U the two-mode
/// unfolding) with a non-negligible eigenvalue, i.e. a left singular vector of
/// U with non-zero singular value.
inline bool is_robust_eigenvector(const DenseSymmetricTensor& t, const RealVector& a, double tol)
{
    if (t.order() < 3)
        throw std::invalid_argument("is_robust_eigenvector: tensor order must be >= 3");
    if (a.size() != t.dim())
        throw std::invalid_argument("is_robust_eigenvector: vector dimension mismatch");
    const auto unfolded = t.unfold_view(2);
    const RealVector v = kron_power(a, 2);
    const RealVector gv = unfolded * (unfolded.transpose() * v);
    const double rayleigh = v.dot(gv);
    return (gv - rayleigh * v).norm() <= tol && rayleigh > tol;
}

} // namespace orthotensor
