#include "tsne/affinity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsne {

AffinityConfig AffinityConfig::fixed_sigma(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("fixed sigma must be positive");
    AffinityConfig c;
    c.mode = Mode::FixedSigma;
    c.sigma = s;
    return c;
}

AffinityConfig AffinityConfig::with_perplexity(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("perplexity must be positive");
    AffinityConfig c;
    c.mode = Mode::Perplexity;
    c.perplexity = p;
    return c;
}

Matrix pairwise_sq_dists(const Matrix& points) {
    std::size_t n = points.rows(), d = points.cols();
    Matrix sq(n, n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* xi = points.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double* xj = points.row(j);
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    double diff = xi[c] - xj[c];
                    s += diff * diff;
                }
                sq(i, j) = s;
            }
        }
    });
    return sq;
}

namespace {

/// Entropy in nats of the Gaussian row for anchor i at bandwidth sigma,
/// without materializing the row.
double row_entropy(const Matrix& sq, std::size_t i, double sigma) {
    std::size_t n = sq.rows();
    if (std::isinf(sigma)) return std::log(static_cast<double>(n - 1));
    double inv = 1.0 / (2.0 * sigma * sigma);
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        max_exponent = std::max(max_exponent, -sq(i, j) * inv);
    }
    double sum = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double x = -sq(i, j) * inv - max_exponent;
        double w = std::exp(x);
        sum += w;
        weighted += w * x;
    }
    return std::log(sum) - weighted / sum;
}

void fill_row(const Matrix& sq, std::size_t i, double sigma, ConditionalRow& row) {
    std::size_t n = sq.rows();
    row.anchor = i;
    row.probs.assign(n - 1, 0.0);
    if (std::isinf(sigma)) {
        double u = 1.0 / static_cast<double>(n - 1);
        for (double& p : row.probs) p = u;
        return;
    }
    double inv = 1.0 / (2.0 * sigma * sigma);
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        max_exponent = std::max(max_exponent, -sq(i, j) * inv);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double w = std::exp(-sq(i, j) * inv - max_exponent);
        row.probs[row.slot(j)] = w;
        sum += w;
    }
    for (double& p : row.probs) p /= sum;
}

constexpr double kSigmaLo = 1e-20;
constexpr double kSigmaHi = 1e20;

}  // namespace

std::vector<ConditionalRow> conditional_rows_from_sq(const Matrix& sq,
                                                     const std::vector<double>& sigmas) {
    std::size_t n = sq.rows();
    if (n < 2) throw std::invalid_argument("conditional rows need n >= 2");
    if (sigmas.size() != n) throw std::invalid_argument("sigma count must equal n");
    for (double s : sigmas) {
        if (!(s > 0.0)) throw std::invalid_argument("bandwidths must be positive");
    }
    std::vector<ConditionalRow> rows(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fill_row(sq, i, sigmas[i], rows[i]);
    });
    return rows;
}

std::vector<ConditionalRow> conditional_rows(const Matrix& points,
                                             const std::vector<double>& sigmas) {
    return conditional_rows_from_sq(pairwise_sq_dists(points), sigmas);
}

BandwidthResult bandwidth_search_from_sq(const Matrix& sq, const AffinityConfig& config) {
    if (config.mode != AffinityConfig::Mode::Perplexity) {
        throw std::invalid_argument("bandwidth_search requires perplexity mode");
    }
    std::size_t n = sq.rows();
    if (n < 2) throw std::invalid_argument("bandwidth_search needs n >= 2");

    BandwidthResult result;
    result.sigmas.assign(n, 0.0);
    result.achieved_perplexities.assign(n, 0.0);

    // paper convention: a target at or above n-1 means uniform rows
    if (config.perplexity >= static_cast<double>(n - 1)) {
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            result.sigmas[i] = inf;
            result.achieved_perplexities[i] = static_cast<double>(n - 1);
        }
        return result;
    }

    double target = std::log(config.perplexity);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            int budget = config.max_search_iterations;
            auto eval = [&](double s) {
                --budget;
                return row_entropy(sq, i, s);
            };

            double lo = kSigmaLo, hi = kSigmaHi;
            double sigma = 1.0;
            double h = eval(sigma);
            double best_sigma = sigma, best_err = std::abs(h - target);

            // expand from sigma=1 toward the bracketing side, then bisect
            if (h < target) {
                lo = sigma;
                while (budget > 0 && lo < kSigmaHi) {
                    double next = std::min(lo * 10.0, kSigmaHi);
                    double hn = eval(next);
                    if (std::abs(hn - target) < best_err) {
                        best_err = std::abs(hn - target);
                        best_sigma = next;
                    }
                    if (hn >= target) {
                        hi = next;
                        break;
                    }
                    lo = next;
                }
            } else {
                hi = sigma;
                while (budget > 0 && hi > kSigmaLo) {
                    double next = std::max(hi / 10.0, kSigmaLo);
                    double hn = eval(next);
                    if (std::abs(hn - target) < best_err) {
                        best_err = std::abs(hn - target);
                        best_sigma = next;
                    }
                    if (hn <= target) {
                        lo = next;
                        break;
                    }
                    hi = next;
                }
            }

            while (budget > 0 && best_err > config.entropy_tolerance) {
                double mid = std::sqrt(lo * hi);  // geometric midpoint
                double hm = eval(mid);
                if (std::abs(hm - target) < best_err) {
                    best_err = std::abs(hm - target);
                    best_sigma = mid;
                }
                if (hm < target) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }

            result.sigmas[i] = best_sigma;
            result.achieved_perplexities[i] = std::exp(row_entropy(sq, i, best_sigma));
        }
    });
    return result;
}

BandwidthResult bandwidth_search(const Matrix& points, const AffinityConfig& config) {
    return bandwidth_search_from_sq(pairwise_sq_dists(points), config);
}

PairDistribution symmetrize(const std::vector<ConditionalRow>& rows) {
    std::size_t n = rows.size();
    if (n < 2) throw std::invalid_argument("symmetrize needs at least 2 rows");
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].anchor != i || rows[i].probs.size() != n - 1) {
            throw std::invalid_argument("row set does not form a complete n-point conditional");
        }
    }

    PairDistribution p;
    p.n = n;
    p.mass.resize(pair_count(n));
    // Divide by the accumulated total rather than the nominal n, so the
    // distribution sums to 1 at full precision (the total equals n up to
    // rounding).
    long double total = 0.0L;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            double raw = rows[i].probs[rows[i].slot(j)] + rows[j].probs[rows[j].slot(i)];
            p.mass[k] = raw;
            total += static_cast<long double>(raw);
        }
    }
    for (double& m : p.mass) {
        m = static_cast<double>(static_cast<long double>(m) / total);
    }
    return p;
}

double uniformity_statistic(const PairDistribution& p) {
    std::size_t pairs = pair_count(p.n);
    double u = 1.0 / static_cast<double>(pairs);
    double stat = 0.0;
    for (double m : p.mass) stat = std::max(stat, std::abs(m - u) / u);
    return stat;
}

PairDistribution build_affinity(const Matrix& points, const AffinityConfig& config) {
    Matrix sq = pairwise_sq_dists(points);
    std::vector<double> sigmas;
    if (config.mode == AffinityConfig::Mode::FixedSigma) {
        sigmas.assign(points.rows(), config.sigma);
    } else {
        sigmas = bandwidth_search_from_sq(sq, config).sigmas;
    }
    return symmetrize(conditional_rows_from_sq(sq, sigmas));
}

}  // namespace tsne
