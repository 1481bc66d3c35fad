#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tsne/divergences.hpp"

namespace tsne {

struct OptimizerConfig {
    std::size_t output_dim = 2;
    std::size_t total_iterations = 1000;
    std::size_t exaggeration_iterations = 500;
    double alpha = 12.0;      // early-exaggeration factor on attractive forces
    double step_size = 0.1;
    // (start iteration, gamma) entries; the last entry at or before the
    // current iteration applies
    std::vector<std::pair<std::size_t, double>> momentum_schedule = {{0, 0.5}, {250, 0.8}};
    double init_scale = 1e-4;
    std::uint64_t seed = 0;

    double momentum_at(std::size_t iteration) const;
    void validate() const;
};

struct EmbeddingState {
    Matrix y;         // n x s coordinates
    Matrix velocity;  // previous applied update
    std::size_t iteration = 0;
};

struct RunResult {
    EmbeddingState final_state;
    std::vector<std::pair<std::size_t, Matrix>> snapshots;
    std::vector<double> objective_trace;  // total_iterations + 1 entries
};

/// Cauchy-kernel pair distribution for an embedding, plus the normalizer Z.
std::pair<PairDistribution, double> low_dim_affinities(const Matrix& y);

/// D(P || Q(Y)).
double objective(const PairDistribution& p, const Matrix& y);

/// Exact gradient of the objective, 4 sum_j (p_ij - q_ij) q_ij Z (y_i - y_j).
Matrix kl_gradient(const PairDistribution& p, const Matrix& y);

/// One update: direction uses attractive forces scaled by alpha during the
/// exaggeration phase, then update = -h * direction + gamma * velocity.
EmbeddingState descent_step(const EmbeddingState& state, const PairDistribution& p,
                            const OptimizerConfig& config);

/// Gaussian initialization from the config seed (one stream per point).
Matrix initialize_embedding(std::size_t n, const OptimizerConfig& config);

/// Full descent loop. The trace records the true objective (alpha treated
/// as 1) at every iteration including iteration 0; snapshots are taken after
/// the listed iterations complete. snapshot_iterations must be sorted.
RunResult run(const PairDistribution& p, const OptimizerConfig& config,
              const std::vector<std::size_t>& snapshot_iterations);

}  // namespace tsne
