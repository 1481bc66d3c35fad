#include "tsne/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tsne/rng.hpp"

namespace tsne {

const char* theorem_tag_name(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::prop_volume: return "prop_volume";
        case TheoremTag::prop_doubled_frame: return "prop_doubled_frame";
        case TheoremTag::prop_single_point: return "prop_single_point";
        case TheoremTag::thm_sphere: return "thm_sphere";
        case TheoremTag::lemma_small_kl: return "lemma_small_kl";
        case TheoremTag::lemma_concentration: return "lemma_concentration";
    }
    return "unknown";
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t s) {
    double d = 0.0;
    for (std::size_t c = 0; c < s; ++c) {
        double diff = a[c] - b[c];
        d += diff * diff;
    }
    return d;
}

struct Ball {
    double center[3] = {0.0, 0.0, 0.0};
    double r2 = -1.0;  // negative marks "no ball yet"

    bool contains(const double* p, std::size_t s) const {
        if (r2 < 0.0) return false;
        double d = 0.0;
        for (std::size_t c = 0; c < s; ++c) {
            double diff = p[c] - center[c];
            d += diff * diff;
        }
        return d <= r2 + 1e-10 * std::max(1.0, r2);
    }
};

/// Exact circumball through all support points, or r2 < 0 when the support is
/// degenerate (the caller then falls back to smaller supports).
Ball circumball(const std::vector<const double*>& support, std::size_t s) {
    Ball b;
    std::size_t m = support.size();
    if (m == 0) return b;
    if (m == 1) {
        for (std::size_t c = 0; c < s; ++c) b.center[c] = support[0][c];
        b.r2 = 0.0;
        return b;
    }
    if (m == 2) {
        for (std::size_t c = 0; c < s; ++c) b.center[c] = 0.5 * (support[0][c] + support[1][c]);
        b.r2 = 0.25 * sq_dist(support[0], support[1], s);
        return b;
    }
    const double* p0 = support[0];
    if (m == 3) {
        // circumcenter in the plane of the three points: c = p0 + x*a + y*b
        double a[3], v[3];
        double aa = 0.0, ab = 0.0, bb = 0.0;
        for (std::size_t c = 0; c < s; ++c) {
            a[c] = support[1][c] - p0[c];
            v[c] = support[2][c] - p0[c];
            aa += a[c] * a[c];
            ab += a[c] * v[c];
            bb += v[c] * v[c];
        }
        double det = 2.0 * (aa * bb - ab * ab);
        if (std::abs(det) <= 1e-14 * std::max(1.0, aa * bb)) return b;
        double x = (aa * bb - bb * ab) / det;
        double y = (bb * aa - aa * ab) / det;
        b.r2 = 0.0;
        for (std::size_t c = 0; c < s; ++c) {
            double off = x * a[c] + y * v[c];
            b.center[c] = p0[c] + off;
            b.r2 += off * off;
        }
        return b;
    }
    // m == 4, s == 3: solve 2 (p_i - p0) . c' = |p_i - p0|^2 by Cramer's rule
    double r[3][3], rhs[3];
    double scale = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        rhs[i] = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            r[i][c] = support[i + 1][c] - p0[c];
            rhs[i] += r[i][c] * r[i][c];
            scale = std::max(scale, std::abs(r[i][c]));
        }
        rhs[i] *= 0.5;
    }
    double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
                 r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                 r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if (std::abs(det) <= 1e-14 * std::max(1.0, scale * scale * scale)) return b;
    double sol[3];
    for (std::size_t k = 0; k < 3; ++k) {
        double m3[3][3];
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t c = 0; c < 3; ++c) m3[i][c] = c == k ? rhs[i] : r[i][c];
        sol[k] = (m3[0][0] * (m3[1][1] * m3[2][2] - m3[1][2] * m3[2][1]) -
                  m3[0][1] * (m3[1][0] * m3[2][2] - m3[1][2] * m3[2][0]) +
                  m3[0][2] * (m3[1][0] * m3[2][1] - m3[1][1] * m3[2][0])) /
                 det;
    }
    b.r2 = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        b.center[c] = p0[c] + sol[c];
        b.r2 += sol[c] * sol[c];
    }
    return b;
}

/// Smallest ball with the support points on its boundary that still covers
/// them all; degenerate supports fall back to circumballs of subsets.
Ball ball_of_support(const std::vector<const double*>& support, std::size_t s) {
    Ball b = circumball(support, s);
    if (b.r2 >= 0.0) return b;
    Ball best;
    std::size_t m = support.size();
    for (std::size_t skip = 0; skip < m; ++skip) {
        std::vector<const double*> sub;
        for (std::size_t i = 0; i < m; ++i) {
            if (i != skip) sub.push_back(support[i]);
        }
        Ball cand = ball_of_support(sub, s);
        bool covers = true;
        for (const double* p : support) covers = covers && cand.contains(p, s);
        if (covers && (best.r2 < 0.0 || cand.r2 < best.r2)) best = cand;
    }
    return best;
}

Ball welzl(std::vector<const double*>& pts, std::size_t count,
           std::vector<const double*>& support, std::size_t s) {
    if (count == 0 || support.size() == s + 1) return ball_of_support(support, s);
    const double* p = pts[count - 1];
    Ball b = welzl(pts, count - 1, support, s);
    if (b.r2 >= 0.0 && b.contains(p, s)) return b;
    support.push_back(p);
    b = welzl(pts, count - 1, support, s);
    support.pop_back();
    return b;
}

}  // namespace

CoveringBall covering_ball(const Matrix& y, double fraction) {
    std::size_t n = y.rows();
    if (n < 1) throw std::invalid_argument("covering_ball needs n >= 1");
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("covering fraction must lie in (0,1]");
    }
    std::size_t need = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    need = std::max<std::size_t>(need, 1);

    CoveringBall best{0, std::numeric_limits<double>::infinity()};
    std::vector<double> dists(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dists[j] = sq_dist(y.row(i), y.row(j), y.cols());
        std::nth_element(dists.begin(), dists.begin() + (need - 1), dists.end());
        double radius = std::sqrt(dists[need - 1]);
        if (radius < best.radius) best = {i, radius};
    }
    return best;
}

EnclosingBall enclosing_ball(const Matrix& y) {
    std::size_t n = y.rows(), s = y.cols();
    if (n < 1) throw std::invalid_argument("enclosing_ball needs n >= 1");
    if (s < 2 || s > 3) throw std::invalid_argument("enclosing_ball supports 2 or 3 dimensions");

    std::vector<const double*> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = y.row(i);
    // deterministic shuffle so the expected-linear recursion depth holds
    SplitMix64 gen(0x5EEDBA11ULL);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = gen.next() % (i + 1);
        std::swap(pts[i], pts[j]);
    }
    std::vector<const double*> support;
    Ball b = welzl(pts, n, support, s);

    EnclosingBall out;
    out.center.assign(b.center, b.center + s);
    out.radius = std::sqrt(std::max(b.r2, 0.0));
    return out;
}

BallCheck theorem_ball_check(const Matrix& y, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("theorem_ball_check needs r > 0");
    std::size_t n = y.rows();
    BallCheck out;
    double r2 = r * r;
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t inside = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (sq_dist(y.row(i), y.row(j), y.cols()) < r2) ++inside;
        }
        best = std::max(best, inside);
    }
    out.fraction_in_r_ball = static_cast<double>(best) / static_cast<double>(n);
    out.enclosing_radius = enclosing_ball(y).radius;
    out.passes = out.fraction_in_r_ball >= 1.0 - r;
    return out;
}

GridStats grid_collision_stats(const Matrix& x, const Matrix& y, double g, double far_threshold) {
    std::size_t n = y.rows();
    if (x.rows() != n) throw std::invalid_argument("grid stats: X and Y row counts differ");
    if (y.cols() != 2) throw std::invalid_argument("grid stats require a 2-d embedding");
    if (!(g > 0.0)) throw std::invalid_argument("grid parameter g must be positive");

    EnclosingBall ball = enclosing_ball(y);
    GridStats out;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = y(i, 0) - ball.center[0];
        double dy = y(i, 1) - ball.center[1];
        out.b = std::max(out.b, std::sqrt(dx * dx + dy * dy));
    }

    double root_n = std::sqrt(static_cast<double>(n));
    std::size_t per_side = static_cast<std::size_t>(std::ceil(root_n / g));
    per_side = std::max<std::size_t>(per_side, 1);
    out.cells = per_side * per_side;
    out.cell_side = out.b > 0.0 ? 2.0 * out.b / static_cast<double>(per_side) : 0.0;

    std::vector<std::size_t> occupancy(out.cells, 0);
    std::vector<std::size_t> cell_of(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t col = 0, row = 0;
        if (out.cell_side > 0.0) {
            auto clamp_cell = [&](double coord, double center) {
                double u = (coord - center + out.b) / out.cell_side;
                auto c = static_cast<long long>(std::floor(u));
                c = std::clamp<long long>(c, 0, static_cast<long long>(per_side) - 1);
                return static_cast<std::size_t>(c);
            };
            col = clamp_cell(y(i, 0), ball.center[0]);
            row = clamp_cell(y(i, 1), ball.center[1]);
        }
        cell_of[i] = row * per_side + col;
        ++occupancy[cell_of[i]];
    }
    std::size_t alone = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (occupancy[cell_of[i]] == 1) ++alone;
    }
    out.fraction_alone = static_cast<double>(alone) / static_cast<double>(n);
    if (static_cast<double>(alone) > static_cast<double>(out.cells)) {
        throw std::logic_error("pigeonhole violated: more singleton points than cells");
    }

    double close = 3.0 * out.b * g / root_n;
    double close2 = close * close;
    double far2 = far_threshold * far_threshold;
    std::size_t far_but_close = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (sq_dist(x.row(i), x.row(j), x.cols()) >= far2 &&
                sq_dist(y.row(i), y.row(j), 2) <= close2) {
                ++far_but_close;
                break;
            }
        }
    }
    out.fraction_far_but_close = static_cast<double>(far_but_close) / static_cast<double>(n);
    return out;
}

void BlockPartition::validate(std::size_t n) const {
    std::vector<int> seen(n, 0);
    for (std::size_t i : a) {
        if (i >= n || seen[i]++) throw std::invalid_argument("block partition is not a partition");
    }
    for (std::size_t i : b) {
        if (i >= n || seen[i]++) throw std::invalid_argument("block partition is not a partition");
    }
    if (a.size() + b.size() != n) {
        throw std::invalid_argument("block partition does not cover all points");
    }
}

BlockPartition BlockPartition::halves(std::size_t n) {
    BlockPartition part;
    for (std::size_t i = 0; i < n / 2; ++i) part.a.push_back(i);
    for (std::size_t i = n / 2; i < n; ++i) part.b.push_back(i);
    return part;
}

BlockStats block_stats(const PairDistribution& p, const PairDistribution& q,
                       const BlockPartition& partition, double sigma) {
    if (p.n != q.n) throw std::invalid_argument("block_stats: distributions differ in n");
    if (!(sigma > 0.0)) throw std::invalid_argument("block_stats: sigma must be positive");
    partition.validate(p.n);

    std::vector<int> in_a(p.n, 0);
    for (std::size_t i : partition.a) in_a[i] = 1;

    BlockStats out;
    out.p_blocks.assign(3, 0.0);
    out.q_blocks.assign(3, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = i + 1; j < p.n; ++j, ++k) {
            std::size_t block = static_cast<std::size_t>(2 - in_a[i] - in_a[j]);
            out.p_blocks[block] += p.mass[k];
            out.q_blocks[block] += q.mass[k];
        }
    }
    out.p0_star = 2.0 / (1.0 + std::exp(-3.0 / (2.0 * sigma * sigma)));
    out.p1_star = 2.0 - out.p0_star;
    out.block_kl = kl_divergence(std::span<const double>(out.p_blocks),
                                 std::span<const double>(out.q_blocks));
    out.block_tv = tv_distance(std::span<const double>(out.p_blocks),
                               std::span<const double>(out.q_blocks));
    out.pinsker_lower_bound = 2.0 * out.block_tv * out.block_tv;

    // chain rule: coarsening onto the blocks can only lose divergence
    double full_kl = kl_divergence(p, q);
    if (out.block_kl > full_kl + 1e-12) {
        throw std::logic_error("block KL exceeds full KL; chain rule violated");
    }
    return out;
}

double cap_measure_bound(double r, std::size_t d) {
    if (!(r > 0.0 && r < 2.0)) throw std::invalid_argument("cap bound needs 0 < r < 2");
    if (d < 2) throw std::invalid_argument("cap bound needs d >= 2");
    double log_bound = -0.5 * std::log(2.0 * std::numbers::pi * static_cast<double>(d)) +
                       static_cast<double>(d - 1) *
                           (std::log(r) - 0.5 * std::log1p(-0.25 * r * r));
    return std::exp(log_bound);
}

}  // namespace tsne
