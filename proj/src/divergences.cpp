#include "tsne/divergences.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsne {

namespace {

void check_sizes(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("distribution size mismatch: " + std::to_string(p.size()) +
                                    " vs " + std::to_string(q.size()));
    }
}

void check_valid(std::span<const double> dist, double tol) {
    double sum = 0.0;
    for (double v : dist) {
        if (v < 0.0 || std::isnan(v)) throw std::invalid_argument("negative entry in distribution");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw std::invalid_argument("distribution sums to " + std::to_string(sum) + ", not 1");
    }
}

}  // namespace

void PairDistribution::validate(double tol) const {
    if (mass.size() != pair_count(n)) {
        throw std::invalid_argument("pair distribution has wrong length for n");
    }
    check_valid(mass, tol);
}

PairDistribution PairDistribution::uniform(std::size_t n) {
    PairDistribution u;
    u.n = n;
    u.mass.assign(pair_count(n), 1.0 / static_cast<double>(pair_count(n)));
    return u;
}

double shannon_entropy(std::span<const double> dist) {
    check_valid(dist, 1e-6);
    double h = 0.0;
    for (double v : dist) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    check_sizes(p, q);
    double d = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) continue;
        if (q[k] <= 0.0) return std::numeric_limits<double>::infinity();
        d += p[k] * std::log(p[k] / q[k]);
    }
    return d;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    check_sizes(p, q);
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
    return 0.5 * s;
}

double chi_squared(std::span<const double> p, std::span<const double> q) {
    check_sizes(p, q);
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (q[k] <= 0.0) throw std::invalid_argument("chi_squared: zero entry in denominator");
        double diff = p[k] - q[k];
        s += diff * diff / q[k];
    }
    return s;
}

namespace {
void check_same_n(const PairDistribution& p, const PairDistribution& q) {
    if (p.n != q.n) throw std::invalid_argument("pair distributions have different n");
}
}  // namespace

double kl_divergence(const PairDistribution& p, const PairDistribution& q) {
    check_same_n(p, q);
    return kl_divergence(std::span<const double>(p.mass), std::span<const double>(q.mass));
}

double tv_distance(const PairDistribution& p, const PairDistribution& q) {
    check_same_n(p, q);
    return tv_distance(std::span<const double>(p.mass), std::span<const double>(q.mass));
}

double chi_squared(const PairDistribution& p, const PairDistribution& q) {
    check_same_n(p, q);
    return chi_squared(std::span<const double>(p.mass), std::span<const double>(q.mass));
}

}  // namespace tsne
