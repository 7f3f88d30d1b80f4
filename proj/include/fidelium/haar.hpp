#pragma once

#include <cstdint>
#include <utility>

#include "fidelium/su_basis.hpp"
#include "fidelium/tensor.hpp"

namespace fidelium {

/// Deterministic counter-based sample source: sample k of a run is fully
/// determined by (seed, counter = k, dim), independent of how counters are
/// sharded across workers.
struct SampleStream {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;
    int dim = 2;
};

/// Per-sample generator: a splitmix64 sequence keyed by (seed, counter).
/// Gaussians come from the Box-Muller transform applied to uniforms
/// u = (x >> 11) * 2^-53 (the log argument is shifted into (0, 1]).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter);

    std::uint64_t next_u64();
    double next_uniform(); // [0, 1)
    double next_gaussian();
    Complex next_complex_gaussian(); // re, im independent N(0, 1)

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// d x d matrix of iid standard complex Gaussian entries, filled row-major.
Matrix gaussian_matrix(CounterRng& rng, int rows, int cols);

/// Haar-distributed pure state: normalized vector of d iid complex Gaussians.
/// Consumes one counter.
PureState sample_pure_state(SampleStream& stream);

/// Haar-distributed d x d unitary: Gram-Schmidt frame of a complex Gaussian
/// matrix (the triangular factor of this decomposition has a positive
/// diagonal, which fixes the column phases). Consumes one counter.
Matrix sample_unitary(SampleStream& stream);

/// Monte Carlo residuals of the group-orthogonality relations for the adjoint
/// representation: the Haar first moment vanishes entrywise and the second
/// moment is delta_ac delta^bd / (d^2 - 1).
struct OrthogonalityReport {
    int dim = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double first_moment_residual = 0.0;  // max |mean Ad(U)| entry
    double second_moment_residual = 0.0; // max |mean Ad(U) x Ad(U) - target| entry
    double standard_error_scale = 0.0;   // 1 / sqrt(n_samples)
};

OrthogonalityReport mc_orthogonality_check(int d, std::uint64_t n_samples,
                                           std::uint64_t seed, int workers = 1);

} // namespace fidelium
