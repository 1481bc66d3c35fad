#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsne/datasets.hpp"
#include "tsne/divergences.hpp"

namespace tsne {

/// Which result each statistic checks.
enum class TheoremTag {
    prop_volume,         // pigeonhole / grid-collision argument
    prop_doubled_frame,  // block-mass lower bound on the doubled frame
    prop_single_point,   // equidistant inputs collapse to a point
    thm_sphere,          // small-ball theorem for near-uniform P
    lemma_small_kl,      // covering ball from near-uniform Q
    lemma_concentration, // sphere samples give near-uniform P
};

const char* theorem_tag_name(TheoremTag tag);

/// One named statistic with the theorem it checks and the parameters used.
struct DiagnosticEntry {
    std::string name;
    std::vector<double> value;  // scalar statistics use a single element
    TheoremTag theorem;
    std::vector<std::pair<std::string, double>> params;
};

struct DiagnosticsReport {
    std::vector<DiagnosticEntry> statistics;
};

struct CoveringBall {
    std::size_t center_index = 0;
    double radius = 0.0;
};

/// Smallest point-centered closed ball containing at least ceil(f*n) points
/// (center included). Exact: sorts each point's distance list. Ties on radius
/// pick the smallest center index.
CoveringBall covering_ball(const Matrix& y, double fraction);

struct EnclosingBall {
    std::vector<double> center;
    double radius = 0.0;
};

/// Exact minimum enclosing ball (Welzl's randomized recursion) for embeddings
/// in 2 or 3 dimensions.
EnclosingBall enclosing_ball(const Matrix& y);

struct BallCheck {
    double fraction_in_r_ball = 0.0;  // best point-centered open ball of radius r
    double enclosing_radius = 0.0;
    bool passes = false;  // fraction >= 1 - r
};

BallCheck theorem_ball_check(const Matrix& y, double r);

struct GridStats {
    double b = 0.0;          // max ||y_i|| after centering at the enclosing-ball center
    double cell_side = 0.0;
    std::size_t cells = 0;   // total cell count
    double fraction_alone = 0.0;
    double fraction_far_but_close = 0.0;
};

/// Pigeonhole statistics on a 2-d embedding: the [-B,B]^2 box is split into
/// ceil(sqrt(n)/g)^2 half-open cells (top/right boundary clamped into the last
/// cell). fraction_far_but_close counts points with a partner at input
/// distance >= far_threshold but embedded distance <= 3Bg/sqrt(n). The
/// pigeonhole bound fraction_alone <= cells/n is asserted on every call.
GridStats grid_collision_stats(const Matrix& x, const Matrix& y, double g,
                               double far_threshold = 0.2);

struct BlockPartition {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;

    /// Throws unless a and b are disjoint and cover [0, n).
    void validate(std::size_t n) const;

    /// First half to A, second half to B (the doubled-frame split).
    static BlockPartition halves(std::size_t n);
};

struct BlockStats {
    // block masses over {(A,A), (A,B), (B,B)} in that order
    std::vector<double> p_blocks;
    std::vector<double> q_blocks;
    double p0_star = 0.0;  // 2 / (1 + e^{-3/2sigma^2})
    double p1_star = 0.0;  // 2 - p0_star
    double block_kl = 0.0;
    double block_tv = 0.0;
    double pinsker_lower_bound = 0.0;  // 2 * block_tv^2
};

/// Coarsens p and q onto the three pair blocks and evaluates the Pinsker
/// chain. The chain-rule bound block_kl <= D(p||q) is asserted on every call.
BlockStats block_stats(const PairDistribution& p, const PairDistribution& q,
                       const BlockPartition& partition, double sigma);

/// Closed-form upper bound on the measure of a distance-r spherical cap of
/// S^{d-1}: (1/sqrt(2 pi d)) (r / sqrt(1 - r^2/4))^{d-1}, evaluated in
/// log-space so large d cannot underflow intermediate factors.
double cap_measure_bound(double r, std::size_t d);

}  // namespace tsne
