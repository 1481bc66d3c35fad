#include "tsne/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsne/rng.hpp"

namespace tsne {

double OptimizerConfig::momentum_at(std::size_t iteration) const {
    double gamma = 0.0;
    for (const auto& [start, g] : momentum_schedule) {
        if (start <= iteration) gamma = g;
    }
    return gamma;
}

void OptimizerConfig::validate() const {
    if (exaggeration_iterations > total_iterations) {
        throw std::invalid_argument("exaggeration_iterations exceeds total_iterations");
    }
    if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
    if (!(init_scale > 0.0)) throw std::invalid_argument("init_scale must be positive");
    for (const auto& [start, g] : momentum_schedule) {
        (void)start;
        if (!(g >= 0.0 && g < 1.0)) throw std::invalid_argument("momentum must lie in [0,1)");
    }
}

namespace {

/// Symmetric full-matrix view of a pair distribution, for per-row access.
Matrix expand_pairs(const PairDistribution& p) {
    Matrix full(p.n, p.n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = i + 1; j < p.n; ++j, ++k) {
            full(i, j) = full(j, i) = p.mass[k];
        }
    }
    return full;
}

/// Cauchy kernel numerators w_ij = (1 + |y_i - y_j|^2)^-1 as a full matrix,
/// and Z summed over pairs in fixed (i,j) order.
double kernel_weights(const Matrix& y, Matrix& w) {
    std::size_t n = y.rows(), s = y.cols();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* yi = y.row(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double* yj = y.row(j);
                double dist = 0.0;
                for (std::size_t c = 0; c < s; ++c) {
                    double diff = yi[c] - yj[c];
                    dist += diff * diff;
                }
                w(i, j) = 1.0 / (1.0 + dist);
            }
        }
    });
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            z += w(i, j);
            w(j, i) = w(i, j);
        }
    }
    return z;
}

double objective_from_weights(const PairDistribution& p, const Matrix& w, double z) {
    double d = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = i + 1; j < p.n; ++j, ++k) {
            if (p.mass[k] > 0.0) d += p.mass[k] * std::log(p.mass[k] * z / w(i, j));
        }
    }
    return d;
}

/// direction_i = 2 sum_j w_ij (alpha p_ij - q_ij) (y_i - y_j), q = w / z.
/// The leading constant is 2 rather than the classic 4 because p and q here
/// are distributions over unordered pairs (twice the ordered-pair masses);
/// this is the exact derivative of objective() and matches finite differences.
void accumulate_direction(const Matrix& y, const Matrix& p_full, const Matrix& w, double z,
                          double alpha, Matrix& direction) {
    std::size_t n = y.rows(), s = y.cols();
    double inv_z = 1.0 / z;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* yi = y.row(i);
            double* out = direction.row(i);
            for (std::size_t c = 0; c < s; ++c) out[c] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double wij = w(i, j);
                double coeff = 2.0 * wij * (alpha * p_full(i, j) - wij * inv_z);
                const double* yj = y.row(j);
                for (std::size_t c = 0; c < s; ++c) out[c] += coeff * (yi[c] - yj[c]);
            }
        }
    });
}

void apply_update(Matrix& y, Matrix& velocity, const Matrix& direction, double h, double gamma,
                  std::size_t next_iteration) {
    for (std::size_t k = 0; k < y.data().size(); ++k) {
        double update = -h * direction.data()[k] + gamma * velocity.data()[k];
        velocity.data()[k] = update;
        y.data()[k] += update;
        if (!std::isfinite(y.data()[k])) {
            throw DivergedError(next_iteration, "embedding diverged at iteration " +
                                                    std::to_string(next_iteration));
        }
    }
}

}  // namespace

std::pair<PairDistribution, double> low_dim_affinities(const Matrix& y) {
    std::size_t n = y.rows();
    if (n < 2) throw std::invalid_argument("low_dim_affinities needs n >= 2");
    Matrix w(n, n);
    double z = kernel_weights(y, w);
    PairDistribution q;
    q.n = n;
    q.mass.resize(pair_count(n));
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++k) q.mass[k] = w(i, j) / z;
    return {std::move(q), z};
}

double objective(const PairDistribution& p, const Matrix& y) {
    if (p.n != y.rows()) throw std::invalid_argument("objective: size mismatch");
    Matrix w(p.n, p.n);
    double z = kernel_weights(y, w);
    return objective_from_weights(p, w, z);
}

Matrix kl_gradient(const PairDistribution& p, const Matrix& y) {
    if (p.n != y.rows()) throw std::invalid_argument("kl_gradient: size mismatch");
    Matrix w(p.n, p.n);
    double z = kernel_weights(y, w);
    Matrix p_full = expand_pairs(p);
    Matrix direction(y.rows(), y.cols());
    accumulate_direction(y, p_full, w, z, 1.0, direction);
    return direction;
}

EmbeddingState descent_step(const EmbeddingState& state, const PairDistribution& p,
                            const OptimizerConfig& config) {
    config.validate();
    if (state.iteration >= config.total_iterations) {
        throw std::invalid_argument("descent_step past total_iterations");
    }
    EmbeddingState next = state;
    Matrix w(p.n, p.n);
    double z = kernel_weights(next.y, w);
    Matrix p_full = expand_pairs(p);
    Matrix direction(next.y.rows(), next.y.cols());
    double alpha = state.iteration < config.exaggeration_iterations ? config.alpha : 1.0;
    accumulate_direction(next.y, p_full, w, z, alpha, direction);
    apply_update(next.y, next.velocity, direction, config.step_size,
                 config.momentum_at(state.iteration), state.iteration + 1);
    next.iteration = state.iteration + 1;
    return next;
}

Matrix initialize_embedding(std::size_t n, const OptimizerConfig& config) {
    Matrix y(n, config.output_dim);
    for (std::size_t i = 0; i < n; ++i) {
        GaussianStream g(substream(config.seed, i));
        for (std::size_t c = 0; c < config.output_dim; ++c) {
            y(i, c) = config.init_scale * g.next();
        }
    }
    return y;
}

RunResult run(const PairDistribution& p, const OptimizerConfig& config,
              const std::vector<std::size_t>& snapshot_iterations) {
    config.validate();
    p.validate();
    for (std::size_t s : snapshot_iterations) {
        if (s > config.total_iterations) {
            throw std::invalid_argument("snapshot iteration beyond total_iterations");
        }
    }

    RunResult result;
    result.final_state.y = initialize_embedding(p.n, config);
    result.final_state.velocity = Matrix(p.n, config.output_dim);
    result.objective_trace.reserve(config.total_iterations + 1);

    Matrix p_full = expand_pairs(p);
    Matrix w(p.n, p.n);
    Matrix direction(p.n, config.output_dim);

    auto want_snapshot = [&](std::size_t it) {
        return std::binary_search(snapshot_iterations.begin(), snapshot_iterations.end(), it);
    };
    if (want_snapshot(0)) result.snapshots.emplace_back(0, result.final_state.y);

    for (std::size_t t = 0; t < config.total_iterations; ++t) {
        double z = kernel_weights(result.final_state.y, w);
        result.objective_trace.push_back(objective_from_weights(p, w, z));
        double alpha = t < config.exaggeration_iterations ? config.alpha : 1.0;
        accumulate_direction(result.final_state.y, p_full, w, z, alpha, direction);
        apply_update(result.final_state.y, result.final_state.velocity, direction,
                     config.step_size, config.momentum_at(t), t + 1);
        result.final_state.iteration = t + 1;
        if (want_snapshot(t + 1)) result.snapshots.emplace_back(t + 1, result.final_state.y);
    }
    double z = kernel_weights(result.final_state.y, w);
    result.objective_trace.push_back(objective_from_weights(p, w, z));
    return result;
}

}  // namespace tsne
