#pragma once

// Factor-count estimation: relax the singular space to n = min(rank, d),
// extract n candidates, keep those whose pursuit objective is close to 1 and
// pick the elbow of the sorted lambda^2 scree.

#include "orthotensor/linalg.hpp"
#include "orthotensor/tensor.hpp"
#include "orthotensor/tmhosvd.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthotensor {

/// Number of singular values >= rel_tol * sigma_1 (0 for a zero matrix).
inline int numerical_rank(const DenseMatrix& a, double rel_tol)
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("numerical_rank: rel_tol must be in (0, 1)");
    const auto s = singular_values(a);
    if (s.empty() || s.front() <= 0.0)
        return 0;
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= rel_tol * s.front(); }));
}

struct RankCandidate
{
    int index = 0; ///< 1-based extraction order
    double objective = 0.0;
    double lambda_hat = 0.0;
};

struct RankSelectionReport
{
    int n_relaxed = 0;
    std::vector<RankCandidate> candidates;
    std::vector<int> filtered_set;          ///< candidate indices with objective >= threshold
    std::vector<double> sorted_lambda_sq;   ///< descending over the filtered set
    std::vector<double> elbow_scores;       ///< lambda^2_(j) / lambda^2_(j+1), sentinel-terminated
    int r_hat = 0;
    std::vector<std::string> diagnostics;
};

struct RankSelectOptions
{
    double objective_threshold = 0.9;
    double rank_tol = 1e-6;
    PursuitOptions pursuit{};
};

/// Elbow of a descending scree: position j (1-based) maximizing
/// values[j-1] / values[j], where values is extended by the sentinel
/// rank_tol * values[0]. The first maximum wins.
inline int scree_elbow(const std::vector<double>& descending, double rank_tol, std::vector<double>* scores = nullptr)
{
    if (descending.empty() || descending.front() <= 0.0)
        return 0;
    std::vector<double> ext = descending;
    ext.push_back(rank_tol * descending.front());
    int best = 0;
    double best_score = -1.0;
    for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
        double score;
        if (ext[j + 1] > 0.0)
            score = ext[j] / ext[j + 1];
        else
            score = ext[j] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        if (scores)
            scores->push_back(score);
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(j) + 1;
        }
    }
    return best;
}

inline RankSelectionReport select_rank(const DenseSymmetricTensor& t, const RankSelectOptions& opts = {})
{
    if (!(opts.objective_threshold > 0.0 && opts.objective_threshold < 1.0))
        throw std::invalid_argument("select_rank: objective_threshold must be in (0, 1)");
    if (!(opts.rank_tol > 0.0 && opts.rank_tol < 1.0))
        throw std::invalid_argument("select_rank: rank_tol must be in (0, 1)");
    if (t.order() < 3)
        throw std::invalid_argument("select_rank: tensor order must be >= 3");

    RankSelectionReport report;
    report.n_relaxed = std::min(numerical_rank(t.unfold_view(2), opts.rank_tol), t.dim());
    if (report.n_relaxed == 0) {
        report.diagnostics.push_back("select_rank: two-mode unfolding is numerically zero");
        return report;
    }

    PursuitOptions pursuit = opts.pursuit;
    pursuit.rank_tol = std::min(pursuit.rank_tol, opts.rank_tol);
    auto dec = decompose(t, report.n_relaxed, pursuit);
    for (const auto& f : dec.factors)
        report.candidates.push_back({f.iteration, f.objective, f.lambda_hat});

    for (const auto& c : report.candidates)
        if (c.objective >= opts.objective_threshold) {
            report.filtered_set.push_back(c.index);
            report.sorted_lambda_sq.push_back(c.lambda_hat * c.lambda_hat);
        }
    if (report.filtered_set.empty()) {
        report.diagnostics.push_back("select_rank: no candidate reached the objective threshold");
        return report;
    }
    std::sort(report.sorted_lambda_sq.begin(), report.sorted_lambda_sq.end(), std::greater<>());
    report.r_hat = scree_elbow(report.sorted_lambda_sq, opts.rank_tol, &report.elbow_scores);
    report.diagnostics.push_back("select_rank: objective threshold and elbow rule are heuristics");
    return report;
}

} // namespace orthotensor
