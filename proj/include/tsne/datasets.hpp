#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsne/core.hpp"

namespace tsne {

/// Input dataset: n points in R^d with optional integer labels and the
/// generator provenance that produced it.
struct PointCloud {
    Matrix points;
    std::vector<int> labels;  // empty when the generator assigns none
    std::string generator;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;

    std::size_t n() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
    bool has_labels() const { return !labels.empty(); }
};

/// n i.i.d. uniform samples on the unit sphere S^{d-1}: normalized standard
/// Gaussian vectors, one RNG stream per point.
PointCloud sample_sphere(std::size_t n, std::size_t d, std::uint64_t seed);

/// Sphere samples conditioned on |first coordinate| >= d^{-threshold_exponent},
/// by rejection. Labels are 1 on the positive cap, 0 on the negative cap.
PointCloud sample_split_sphere(std::size_t n, std::size_t d, std::uint64_t seed,
                               double threshold_exponent = 0.1);

/// k Gaussian clusters of per_cluster points around the elementary basis
/// vectors of R^k; labels are cluster indices.
PointCloud simplex_clusters(std::size_t k, std::size_t per_cluster, double sigma,
                            std::uint64_t seed);

/// {e_1..e_n, 2e_{n+1}..2e_{2n}} in R^{2n}; labels 0 for the unit block,
/// 1 for the doubled block.
PointCloud doubled_frame(std::size_t n_half);

/// n orthonormal basis vectors of R^n (all pairwise distances sqrt 2).
PointCloud equidistant_simplex(std::size_t n);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenpairs are sorted by descending eigenvalue; ties keep the original
/// coordinate order. Each eigenvector's largest-magnitude entry is positive.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;  // column k is the eigenvector for values[k]
};
EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tol = 1e-12);

struct PcaResult {
    Matrix projection;               // n x k scores
    std::vector<double> eigenvalues; // all d covariance eigenvalues, descending
    Matrix components;               // d x k eigenvector columns
};

/// Centers the data and projects onto the top-k eigenvectors of the sample
/// covariance (1/(n-1) normalization), computed with jacobi_eigen.
PcaResult pca_project(const PointCloud& cloud, std::size_t k);

}  // namespace tsne
