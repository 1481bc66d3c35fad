#include "tsne/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tsne/rng.hpp"

namespace tsne {

namespace {

void fill_unit_sphere_point(double* out, std::size_t d, GaussianStream& g) {
    while (true) {
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            out[c] = g.next();
            norm_sq += out[c] * out[c];
        }
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (std::size_t c = 0; c < d; ++c) out[c] *= inv;
            return;
        }
        // zero-norm draw: redraw from the same stream
    }
}

}  // namespace

PointCloud sample_sphere(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 2) throw std::invalid_argument("sample_sphere requires n >= 1, d >= 2");
    PointCloud cloud;
    cloud.points = Matrix(n, d);
    cloud.generator = "sphere";
    cloud.params = {{"n", double(n)}, {"d", double(d)}};
    cloud.seed = seed;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GaussianStream g(substream(seed, i));
            fill_unit_sphere_point(cloud.points.row(i), d, g);
        }
    });
    return cloud;
}

PointCloud sample_split_sphere(std::size_t n, std::size_t d, std::uint64_t seed,
                               double threshold_exponent) {
    if (n < 1 || d < 2) throw std::invalid_argument("sample_split_sphere requires n >= 1, d >= 2");
    double threshold = std::pow(static_cast<double>(d), -threshold_exponent);
    PointCloud cloud;
    cloud.points = Matrix(n, d);
    cloud.labels.resize(n);
    cloud.generator = "split-sphere";
    cloud.params = {{"n", double(n)}, {"d", double(d)}, {"threshold_exponent", threshold_exponent}};
    cloud.seed = seed;

    std::size_t accepted = 0;
    std::uint64_t candidate = 0;
    std::vector<double> buf(d);
    while (accepted < n) {
        GaussianStream g(substream(seed, candidate));
        fill_unit_sphere_point(buf.data(), d, g);
        ++candidate;
        if (std::abs(buf[0]) >= threshold) {
            std::copy(buf.begin(), buf.end(), cloud.points.row(accepted));
            cloud.labels[accepted] = buf[0] > 0.0 ? 1 : 0;
            ++accepted;
        }
        if (candidate >= 1000000 && static_cast<double>(accepted) < 1e-6 * candidate) {
            throw std::runtime_error("split-sphere acceptance rate below 1e-6 after " +
                                     std::to_string(candidate) + " candidates (threshold " +
                                     std::to_string(threshold) + ")");
        }
    }
    return cloud;
}

PointCloud simplex_clusters(std::size_t k, std::size_t per_cluster, double sigma,
                            std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("simplex_clusters requires k >= 1");
    std::size_t n = k * per_cluster;
    PointCloud cloud;
    cloud.points = Matrix(n, k);
    cloud.labels.resize(n);
    cloud.generator = "simplex-clusters";
    cloud.params = {{"k", double(k)}, {"per_cluster", double(per_cluster)}, {"sigma", sigma}};
    cloud.seed = seed;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t cluster = i / per_cluster;
            GaussianStream g(substream(seed, i));
            double* row = cloud.points.row(i);
            for (std::size_t c = 0; c < k; ++c) row[c] = sigma * g.next();
            row[cluster] += 1.0;
            cloud.labels[i] = static_cast<int>(cluster);
        }
    });
    return cloud;
}

PointCloud doubled_frame(std::size_t n_half) {
    if (n_half < 1) throw std::invalid_argument("doubled_frame requires n_half >= 1");
    std::size_t n = 2 * n_half;
    PointCloud cloud;
    cloud.points = Matrix(n, n);
    cloud.labels.resize(n);
    cloud.generator = "doubled-frame";
    cloud.params = {{"n_half", double(n_half)}};
    for (std::size_t i = 0; i < n; ++i) {
        cloud.points(i, i) = i < n_half ? 1.0 : 2.0;
        cloud.labels[i] = i < n_half ? 0 : 1;
    }
    return cloud;
}

PointCloud equidistant_simplex(std::size_t n) {
    if (n < 2) throw std::invalid_argument("equidistant_simplex requires n >= 2");
    PointCloud cloud;
    cloud.points = Matrix(n, n);
    cloud.generator = "equidistant-simplex";
    cloud.params = {{"n", double(n)}};
    for (std::size_t i = 0; i < n; ++i) cloud.points(i, i) = 1.0;
    return cloud;
}

EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tol) {
    std::size_t d = symmetric.rows();
    if (symmetric.cols() != d) throw std::invalid_argument("jacobi_eigen needs a square matrix");
    Matrix a = symmetric;
    Matrix v(d, d);
    for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

    double fro = 0.0;
    for (double x : a.data()) fro += x * x;
    fro = std::sqrt(fro);
    double threshold = tol * (fro > 0.0 ? fro : 1.0);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= threshold) break;

        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    // order by descending eigenvalue, ties by original coordinate order
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out;
    out.values.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t src = order[k];
        out.values[k] = a(src, src);
        // sign convention: largest-magnitude entry positive, first on ties
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < d; ++r) {
            if (std::abs(v(r, src)) > best) {
                best = std::abs(v(r, src));
                arg = r;
            }
        }
        double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) out.vectors(r, k) = sign * v(r, src);
    }
    return out;
}

PcaResult pca_project(const PointCloud& cloud, std::size_t k) {
    std::size_t n = cloud.n(), d = cloud.dim();
    if (k > d) throw std::invalid_argument("pca_project: k exceeds data dimension");
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) mean[c] += cloud.points(i, c);
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix centered(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) centered(i, c) = cloud.points(i, c) - mean[c];

    Matrix cov(d, d);
    double norm = n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += centered(i, a) * centered(i, b);
            cov(a, b) = cov(b, a) = s * norm;
        }
    }

    EigenDecomposition eig = jacobi_eigen(cov);
    PcaResult out;
    out.eigenvalues = eig.values;
    out.components = Matrix(d, k);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t j = 0; j < k; ++j) out.components(c, j) = eig.vectors(c, j);

    out.projection = Matrix(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += centered(i, c) * out.components(c, j);
            out.projection(i, j) = s;
        }
    }
    return out;
}

}  // namespace tsne
