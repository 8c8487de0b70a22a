#pragma once

// Brute-force reference computations for tests. Nothing here calls into the
// library's numerical routines; inputs and outputs are plain std::vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>; // row-major, m[i][j]

/// 1-based combined index 1 + sum_j (i_j - 1) d^(j-1).
inline std::size_t combined_index(const std::vector<int>& one_based, int d)
{
    std::size_t idx = 1;
    std::size_t stride = 1;
    for (int i : one_based) {
        idx += static_cast<std::size_t>(i - 1) * stride;
        stride *= static_cast<std::size_t>(d);
    }
    return idx;
}

/// Calls f(idx) for every 1-based multi-index in lexicographic order.
inline void for_each_index(int k, int d, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> idx(static_cast<std::size_t>(k), 1);
    while (true) {
        f(idx);
        int j = k - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == d) {
            idx[static_cast<std::size_t>(j)] = 1;
            --j;
        }
        if (j < 0)
            return;
        ++idx[static_cast<std::size_t>(j)];
    }
}

inline std::size_t ipow(int d, int k)
{
    std::size_t n = 1;
    for (int i = 0; i < k; ++i)
        n *= static_cast<std::size_t>(d);
    return n;
}

/// Flat data (0-based offsets) of sum_j w_j v_j^{(x)k}, built entry by entry.
inline Vec sum_of_powers(int k, int d, const std::vector<double>& w, const std::vector<Vec>& v)
{
    Vec data(ipow(d, k), 0.0);
    for_each_index(k, d, [&](const std::vector<int>& idx) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            double p = w[j];
            for (int i : idx)
                p *= v[j][static_cast<std::size_t>(i - 1)];
            s += p;
        }
        data[combined_index(idx, d) - 1] = s;
    });
    return data;
}

/// A generic dense symmetric tensor: several random rank-one terms.
inline Vec random_symmetric(int k, int d, std::uint64_t seed, int terms = 6)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<double> w;
    std::vector<Vec> v;
    for (int t = 0; t < terms; ++t) {
        w.push_back(n(rng));
        Vec x(static_cast<std::size_t>(d));
        for (auto& c : x)
            c = n(rng);
        v.push_back(x);
    }
    return sum_of_powers(k, d, w, v);
}

inline Vec random_vector(int d, std::uint64_t seed, bool unit = false)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Vec x(static_cast<std::size_t>(d));
    for (auto& c : x)
        c = n(rng);
    if (unit) {
        double s = 0.0;
        for (double c : x)
            s += c * c;
        for (auto& c : x)
            c /= std::sqrt(s);
    }
    return x;
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Returns eigenvalues and
/// eigenvectors (as columns of the returned matrix: vecs[i][j] = component i of vector j).
inline std::pair<Vec, Mat> jacobi_eigen(Mat a, int sweeps = 100)
{
    const std::size_t n = a.size();
    Mat v(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        v[i][i] = 1.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a[p][q] * a[p][q];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Vec values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = a[i][i];
    return {values, v};
}

/// Singular values (descending) by one-sided Jacobi on the columns of a.
inline Vec jacobi_singular_values(Mat a)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    // Work on the wider orientation's transpose so columns <= rows.
    if (n > m) {
        Mat t(n, Vec(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t[j][i] = a[i][j];
        return jacobi_singular_values(t);
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double worst = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += a[i][p] * a[i][p];
                    beta += a[i][q] * a[i][q];
                    gamma += a[i][p] * a[i][q];
                }
                if (alpha == 0.0 || beta == 0.0)
                    continue;
                worst = std::max(worst, std::abs(gamma) / std::sqrt(alpha * beta));
                if (std::abs(gamma) < 1e-300)
                    continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double ap = a[i][p], aq = a[i][q];
                    a[i][p] = c * ap - s * aq;
                    a[i][q] = s * ap + c * aq;
                }
            }
        if (worst < 1e-15)
            break;
    }
    Vec s(n);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            norm += a[i][j] * a[i][j];
        s[j] = std::sqrt(norm);
    }
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

/// Best permutation by exhaustive search: maximizes sum_i w[i][perm[i]].
inline std::pair<std::vector<int>, double> best_permutation(const Mat& w)
{
    std::vector<int> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_score = -1e300;
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            s += w[i][static_cast<std::size_t>(perm[i])];
        if (s > best_score) {
            best_score = s;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_score};
}

} // namespace oracle
