#pragma once

#include <vector>

#include "tsne/datasets.hpp"
#include "tsne/divergences.hpp"

namespace tsne {

/// Bandwidth selection: a single fixed sigma for every row, or a per-row
/// binary search targeting a perplexity value.
struct AffinityConfig {
    enum class Mode { FixedSigma, Perplexity };
    Mode mode = Mode::Perplexity;
    double sigma = 1.0;          // FixedSigma mode
    double perplexity = 30.0;    // Perplexity mode
    double entropy_tolerance = 1e-5;  // nats
    int max_search_iterations = 100;

    static AffinityConfig fixed_sigma(double s);
    static AffinityConfig with_perplexity(double p);
};

/// Per-row bandwidths; an infinite sigma marks the uniform-row convention
/// used when the perplexity target is at least n-1.
struct BandwidthResult {
    std::vector<double> sigmas;
    std::vector<double> achieved_perplexities;
};

/// Full n x n matrix of squared Euclidean distances.
Matrix pairwise_sq_dists(const Matrix& points);

/// Gaussian conditional rows p_{j|i} with per-row bandwidths. An infinite
/// sigma yields the exact uniform row. Exponents are shifted by the row
/// maximum before exponentiation, so extreme bandwidths cannot underflow the
/// whole row.
std::vector<ConditionalRow> conditional_rows(const Matrix& points,
                                             const std::vector<double>& sigmas);
std::vector<ConditionalRow> conditional_rows_from_sq(const Matrix& sq_dists,
                                                     const std::vector<double>& sigmas);

/// Binary search per row for |H(P_i) - log(perplexity)| <= tolerance over
/// sigma in [1e-20, 1e20]. A target of n-1 or more returns infinity markers
/// without searching. Unreachable targets are reported through
/// achieved_perplexities, never as an error.
BandwidthResult bandwidth_search(const Matrix& points, const AffinityConfig& config);
BandwidthResult bandwidth_search_from_sq(const Matrix& sq_dists, const AffinityConfig& config);

/// p_ij = (p_{i|j} + p_{j|i}) / n over unordered pairs, normalized by the
/// accumulated total so the masses sum to 1 at full precision.
PairDistribution symmetrize(const std::vector<ConditionalRow>& rows);

/// max over pairs of |C(n,2) p_ij - 1|.
double uniformity_statistic(const PairDistribution& p);

/// Convenience: bandwidths (per config) then conditional rows then symmetrize.
PairDistribution build_affinity(const Matrix& points, const AffinityConfig& config);

}  // namespace tsne
