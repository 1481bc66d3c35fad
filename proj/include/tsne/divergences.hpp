#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsne/core.hpp"

namespace tsne {

/// Probability distribution over the C(n,2) unordered pairs of n points.
/// mass[pair_index(n,i,j)] holds the pair (i,j), i < j.
struct PairDistribution {
    std::size_t n = 0;
    std::vector<double> mass;

    /// Throws std::invalid_argument unless entries are nonnegative and sum
    /// to 1 within tol.
    void validate(double tol = 1e-6) const;

    static PairDistribution uniform(std::size_t n);
};

/// Conditional distribution p_{j|i} over the n-1 points other than the anchor.
struct ConditionalRow {
    std::size_t anchor = 0;
    std::vector<double> probs;  // indexed over j != anchor in increasing j

    /// Position of point j inside probs.
    std::size_t slot(std::size_t j) const { return j < anchor ? j : j - 1; }
};

/// -sum p log p in nats, with 0 log 0 = 0. Validates the input.
double shannon_entropy(std::span<const double> dist);

/// sum p log(p/q); returns +infinity where q vanishes on the support of p.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const PairDistribution& p, const PairDistribution& q);

/// Total variation distance, (1/2) sum |p - q|.
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const PairDistribution& p, const PairDistribution& q);

/// Chi-squared divergence sum (p-q)^2/q; throws if q has a zero entry.
double chi_squared(std::span<const double> p, std::span<const double> q);
double chi_squared(const PairDistribution& p, const PairDistribution& q);

}  // namespace tsne
