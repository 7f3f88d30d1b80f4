#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fidelium/haar.hpp"
#include "test_helpers.hpp"

using namespace fidelium;

TEST_CASE("sample_pure_state: normalized, deterministic per (seed, counter)") {
    SampleStream stream{42, 0, 5};
    for (int i = 0; i < 20; ++i) {
        PureState psi = sample_pure_state(stream);
        CHECK(std::abs(psi.amplitudes().squaredNorm() - 1.0) < 1e-12);
    }

    SampleStream a{42, 3, 5};
    SampleStream b{42, 3, 5};
    CHECK(sample_pure_state(a).amplitudes() == sample_pure_state(b).amplitudes());
    CHECK(a.counter == 4);

    SampleStream next_counter{42, 4, 5};
    SampleStream base{42, 3, 5};
    CHECK(sample_pure_state(next_counter).amplitudes() != sample_pure_state(base).amplitudes());

    SampleStream other_seed{43, 3, 5};
    SampleStream base2{42, 3, 5};
    CHECK(sample_pure_state(other_seed).amplitudes() != sample_pure_state(base2).amplitudes());
}

TEST_CASE("sample_unitary: unitary, deterministic, counter advances") {
    SampleStream stream{7, 0, 4};
    for (int i = 0; i < 10; ++i) {
        CHECK(is_unitary(sample_unitary(stream), 1e-12));
    }
    CHECK(stream.counter == 10);

    SampleStream a{7, 2, 4};
    SampleStream b{7, 2, 4};
    CHECK(sample_unitary(a) == sample_unitary(b));
}

TEST_CASE("empirical first moment of rho is identity/d") {
    const std::uint64_t n = 20000;
    for (int d : {2, 3}) {
        SampleStream stream{1234, 0, d};
        Matrix sum = Matrix::Zero(d, d);
        for (std::uint64_t i = 0; i < n; ++i) {
            Vector psi = sample_pure_state(stream).amplitudes();
            sum += psi * psi.adjoint();
        }
        Matrix mean = sum / static_cast<double>(n);
        // largest entry variance is (d-1)/(d^2(d+1)) on the diagonal
        double sigma = std::sqrt((d - 1.0) / (d * d * (d + 1.0)));
        double bound = 5.0 * sigma / std::sqrt(static_cast<double>(n));
        CHECK(max_abs_diff(mean, Matrix::Identity(d, d) / d) < bound);
    }
}

TEST_CASE("unitary invariance smoke test: tr(V rho V+ M) matches tr(rho M)") {
    const std::uint64_t n = 20000;
    const int d = 3;
    // fixed rotation and a fixed Hermitian probe
    SampleStream fixed{99, 0, d};
    Matrix v = sample_unitary(fixed);
    CounterRng rng(5, 0);
    Matrix g = gaussian_matrix(rng, d, d);
    Matrix probe = 0.5 * (g + g.adjoint());

    SampleStream stream{2024, 0, d};
    double sum_rotated = 0.0;
    double sum_plain = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        Vector psi = sample_pure_state(stream).amplitudes();
        Matrix rho = psi * psi.adjoint();
        double plain = trace_product(rho, probe).real();
        double rotated = trace_product(Matrix(v * rho * v.adjoint()), probe).real();
        sum_plain += plain;
        sum_rotated += rotated;
        sum_sq += plain * plain;
    }
    double mean_plain = sum_plain / n;
    double mean_rotated = sum_rotated / n;
    double stderr_plain =
        std::sqrt(std::max(0.0, sum_sq / n - mean_plain * mean_plain) / static_cast<double>(n));
    CHECK(std::abs(mean_plain - mean_rotated) < 5.0 * std::sqrt(2.0) * stderr_plain + 1e-12);
}

TEST_CASE("mc_orthogonality_check: residuals inside the 5-sigma envelope") {
    for (int d : {2, 3}) {
        const std::uint64_t n = 20000;
        OrthogonalityReport report = mc_orthogonality_check(d, n, 11);
        CHECK(report.standard_error_scale == doctest::Approx(1.0 / std::sqrt(double(n))));
        CHECK(report.first_moment_residual < 5.0 * report.standard_error_scale);
        CHECK(report.second_moment_residual < 5.0 * report.standard_error_scale);
        CHECK(report.first_moment_residual > 0.0);
    }
    CHECK_THROWS_AS((void)mc_orthogonality_check(2, 10, 0), Error);
}

TEST_CASE("mc_orthogonality_check residuals scale as 1/sqrt(n)") {
    // log-log regression over slightly more than a decade of n; residuals
    // are averaged over independent seeds per point to tame the noise of
    // the max statistic
    const std::uint64_t counts[] = {1000, 2000, 4000, 8000, 16000};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n_points = 5;
    for (int i = 0; i < n_points; ++i) {
        double mean_residual = 0.0;
        const int n_seeds = 6;
        for (int s = 0; s < n_seeds; ++s) {
            OrthogonalityReport report =
                mc_orthogonality_check(2, counts[i], 1000 + 100 * i + s);
            mean_residual += report.second_moment_residual / n_seeds;
        }
        double x = std::log(static_cast<double>(counts[i]));
        double y = std::log(mean_residual);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (n_points * sxy - sx * sy) / (n_points * sxx - sx * sx);
    CHECK(slope > -0.65);
    CHECK(slope < -0.35);
}

TEST_CASE("mc_orthogonality_check is independent of the worker count") {
    OrthogonalityReport one = mc_orthogonality_check(2, 10000, 5, 1);
    OrthogonalityReport four = mc_orthogonality_check(2, 10000, 5, 4);
    CHECK(one.first_moment_residual == four.first_moment_residual);
    CHECK(one.second_moment_residual == four.second_moment_residual);
}
