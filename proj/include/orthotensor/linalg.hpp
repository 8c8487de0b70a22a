#pragma once

// Dense decompositions used by the two-mode HOSVD pipeline.

#include "orthotensor/errors.hpp"
#include "orthotensor/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace orthotensor {

enum class SvdMethod
{
    automatic, ///< gram when cols > 4 * rows, direct otherwise
    gram,      ///< eigendecomposition of A A^T
    direct,    ///< thin SVD of A
};

struct TruncatedSvdResult
{
    DenseMatrix left_vectors;  ///< rows x r, orthonormal columns a_1..a_r
    DenseMatrix right_vectors; ///< cols x r, b_i (zero column when mu_i = 0)
    std::vector<double> singular_values; ///< mu_1 >= ... >= mu_r >= 0
    double gap_next = 0.0; ///< mu_{r+1}, 0 when r = min(rows, cols)
};

struct EigPair
{
    double value = 0.0;
    RealVector vector;
};

/// Flips v so that its first coordinate with |v_i| > 1e-10 * |v|_inf is positive.
inline void canonicalize_sign(RealVector& v)
{
    const double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0)
        return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-10 * scale) {
            if (v[i] < 0.0)
                v = -v;
            return;
        }
    }
}

namespace detail {

inline void require_finite(const DenseMatrix& a, const char* what)
{
    if (!a.allFinite())
        throw numeric_error(std::string(what) + ": matrix contains non-finite entries");
}

} // namespace detail

inline TruncatedSvdResult truncated_left_svd(const DenseMatrix& a, int r, SvdMethod method = SvdMethod::automatic)
{
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const Eigen::Index full = std::min(rows, cols);
    if (r < 1 || r > full)
        throw std::invalid_argument("truncated_left_svd: r must satisfy 1 <= r <= min(rows, cols)");
    detail::require_finite(a, "truncated_left_svd");

    if (method == SvdMethod::automatic)
        method = cols > 4 * rows ? SvdMethod::gram : SvdMethod::direct;

    TruncatedSvdResult out;
    out.left_vectors.resize(rows, r);
    out.right_vectors.setZero(cols, r);
    out.singular_values.resize(static_cast<std::size_t>(r));

    if (method == SvdMethod::gram) {
        const DenseMatrix gram = a * a.transpose();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(gram);
        if (eig.info() != Eigen::Success)
            throw numeric_error("truncated_left_svd: eigensolver failed");
        // Ascending order; take from the back.
        for (int i = 0; i < r; ++i) {
            const Eigen::Index src = rows - 1 - i;
            out.left_vectors.col(i) = eig.eigenvectors().col(src);
            out.singular_values[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, eig.eigenvalues()[src]));
        }
        if (r < full)
            out.gap_next = std::sqrt(std::max(0.0, eig.eigenvalues()[rows - 1 - r]));
        for (int i = 0; i < r; ++i) {
            const double mu = out.singular_values[static_cast<std::size_t>(i)];
            if (mu > 0.0)
                out.right_vectors.col(i) = a.transpose() * out.left_vectors.col(i) / mu;
        }
    } else {
        Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.left_vectors = svd.matrixU().leftCols(r);
        out.right_vectors = svd.matrixV().leftCols(r);
        for (int i = 0; i < r; ++i)
            out.singular_values[static_cast<std::size_t>(i)] = svd.singularValues()[i];
        if (r < full)
            out.gap_next = svd.singularValues()[r];
    }

    for (int i = 0; i < r; ++i) {
        RealVector left = out.left_vectors.col(i);
        canonicalize_sign(left);
        if (left.dot(out.left_vectors.col(i)) < 0.0) {
            out.left_vectors.col(i) = left;
            out.right_vectors.col(i) *= -1.0;
        }
    }
    return out;
}

/// All singular values of a, descending.
inline std::vector<double> singular_values(const DenseMatrix& a)
{
    detail::require_finite(a, "singular_values");
    if (a.size() == 0)
        return {};
    RealVector s;
    if (a.cols() > 4 * a.rows()) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a * a.transpose(), Eigen::EigenvaluesOnly);
        s = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
    } else {
        Eigen::BDCSVD<DenseMatrix> svd(a);
        s = svd.singularValues();
    }
    return {s.data(), s.data() + s.size()};
}

/// Dominant eigenpair of the symmetric part of m, by absolute eigenvalue.
inline EigPair top_eig_abs(const DenseMatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument("top_eig_abs: matrix must be square and non-empty");
    detail::require_finite(m, "top_eig_abs");
    const DenseMatrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sym);
    if (eig.info() != Eigen::Success)
        throw numeric_error("top_eig_abs: eigensolver failed");
    // Ascending eigenvalues: the winner is at one of the two ends; ties go to the positive end.
    const Eigen::Index n = sym.rows();
    const double lo = eig.eigenvalues()[0];
    const double hi = eig.eigenvalues()[n - 1];
    const Eigen::Index pick = std::abs(lo) > std::abs(hi) ? 0 : n - 1;
    EigPair out{eig.eigenvalues()[pick], eig.eigenvectors().col(pick)};
    out.vector.normalize();
    canonicalize_sign(out.vector);
    return out;
}

/// Orthonormal basis of span(vectors) by twice-iterated modified Gram-Schmidt.
/// Vectors whose residual after projection falls below drop_tol are dropped.
inline std::vector<RealVector> orthonormalize(std::span<const RealVector> vectors, double drop_tol = 1e-10)
{
    std::vector<RealVector> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (!out.empty() && v.size() != out.front().size())
            throw std::invalid_argument("orthonormalize: vectors must share a common dimension");
        RealVector w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : out)
                w -= q.dot(w) * q;
        const double norm = w.norm();
        if (norm < drop_tol)
            continue;
        out.push_back(w / norm);
    }
    return out;
}

} // namespace orthotensor
