#include "fidelium/haar.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace fidelium {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGolden);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Fixed block size for parallel Monte Carlo reductions. Per-block partial
// results are combined in block order, so sums are independent of the worker
// count and schedule.
constexpr std::uint64_t kBlockSize = 4096;

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s);
    state_ = mixed ^ (counter * kGolden);
    // one warm-up step decorrelates neighboring counters
    splitmix64(state_);
}

std::uint64_t CounterRng::next_u64() {
    return splitmix64(state_);
}

double CounterRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
    double u2 = next_uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Complex CounterRng::next_complex_gaussian() {
    double re = next_gaussian();
    double im = next_gaussian();
    return {re, im};
}

Matrix gaussian_matrix(CounterRng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.next_complex_gaussian();
    return m;
}

PureState sample_pure_state(SampleStream& stream) {
    CounterRng rng(stream.seed, stream.counter++);
    Vector amps(stream.dim);
    for (int j = 0; j < stream.dim; ++j) amps(j) = rng.next_complex_gaussian();
    amps /= amps.norm();
    return PureState(std::move(amps));
}

Matrix sample_unitary(SampleStream& stream) {
    CounterRng rng(stream.seed, stream.counter++);
    Matrix g = gaussian_matrix(rng, stream.dim, stream.dim);
    return orthonormalize_columns(g);
}

OrthogonalityReport mc_orthogonality_check(int d, std::uint64_t n_samples,
                                           std::uint64_t seed, int workers) {
    if (d < 2) throw Error("bad_argument", "mc_orthogonality_check: d must be >= 2");
    if (n_samples < 100) {
        throw Error("bad_argument", "mc_orthogonality_check: need at least 100 samples");
    }
    if (workers < 1) workers = 1;

    const GeneratorBasis basis = gell_mann_basis(d);
    const int n_gen = d * d - 1;
    const int vec_len = n_gen * n_gen;

    const std::uint64_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<RealMatrix> block_first(n_blocks);
    std::vector<RealMatrix> block_second(n_blocks);

    std::atomic<std::uint64_t> next_block{0};
    auto run_blocks = [&] {
        for (;;) {
            std::uint64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            RealMatrix first = RealMatrix::Zero(n_gen, n_gen);
            RealMatrix second = RealMatrix::Zero(vec_len, vec_len);
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t end = std::min(n_samples, begin + kBlockSize);
            SampleStream stream{seed, begin, d};
            for (std::uint64_t i = begin; i < end; ++i) {
                Matrix u = sample_unitary(stream);
                AdjointMatrix ad = adjoint_rep(u, basis);
                first += ad.matrix;
                Eigen::Map<const RealVector> flat(ad.matrix.data(), vec_len);
                second.selfadjointView<Eigen::Lower>().rankUpdate(flat, 1.0);
            }
            block_first[b] = std::move(first);
            block_second[b] = std::move(second);
        }
    };

    if (workers == 1) {
        run_blocks();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_blocks);
        for (auto& t : pool) t.join();
    }

    RealMatrix first_sum = RealMatrix::Zero(n_gen, n_gen);
    RealMatrix second_sum = RealMatrix::Zero(vec_len, vec_len);
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        first_sum += block_first[b];
        second_sum += block_second[b];
    }
    second_sum.triangularView<Eigen::StrictlyUpper>() = second_sum.transpose();

    const double inv_n = 1.0 / static_cast<double>(n_samples);
    OrthogonalityReport report;
    report.dim = d;
    report.n_samples = n_samples;
    report.seed = seed;
    report.first_moment_residual = (first_sum * inv_n).cwiseAbs().maxCoeff();
    RealMatrix target = RealMatrix::Identity(vec_len, vec_len) / static_cast<double>(n_gen);
    report.second_moment_residual = (second_sum * inv_n - target).cwiseAbs().maxCoeff();
    report.standard_error_scale = 1.0 / std::sqrt(static_cast<double>(n_samples));
    return report;
}

} // namespace fidelium
