#include "fidelium/designs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fidelium/haar.hpp"

namespace fidelium {

namespace {

/// Qubit state at Bloch vector (nx, ny, nz), phase fixed so the first
/// amplitude is real nonnegative.
PureState qubit_state_from_bloch(double nx, double ny, double nz) {
    double theta = std::acos(std::clamp(nz, -1.0, 1.0));
    double phi = std::atan2(ny, nx);
    Vector amps(2);
    amps(0) = std::cos(theta / 2.0);
    amps(1) = Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2.0);
    return PureState(std::move(amps));
}

// ---------------------------------------------------------------------------
// Fiducial search machinery. The fiducial is parametrized by 2d raw reals
// (re/im of each amplitude) and normalized inside the objective; the two flat
// directions (norm, global phase) are absorbed by the damped least squares.

Vector params_to_state(const RealVector& v) {
    const int d = static_cast<int>(v.size() / 2);
    Vector psi(d);
    for (int j = 0; j < d; ++j) psi(j) = Complex(v(2 * j), v(2 * j + 1));
    double norm = psi.norm();
    if (norm < 1e-12) throw Error("search_failed", "simplex_search: degenerate fiducial");
    return psi / norm;
}

/// Overlap residuals |<psi|X^p Z^q|psi>|^2 - 1/(d+1) over (p,q) != (0,0).
/// (X^p Z^q psi)_j = w^{q(j-p)} psi_{j-p mod d}, so each overlap costs O(d).
RealVector overlap_residuals(const Vector& psi) {
    const int d = static_cast<int>(psi.size());
    const double target = 1.0 / (d + 1);
    RealVector r(d * d - 1);
    int idx = 0;
    for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            Complex overlap = 0.0;
            for (int j = 0; j < d; ++j) {
                int src = (j - p + d) % d;
                double phase = 2.0 * std::numbers::pi * q * src / d;
                overlap += std::conj(psi(j)) * Complex(std::cos(phase), std::sin(phase)) * psi(src);
            }
            r(idx++) = std::norm(overlap) - target;
        }
    }
    return r;
}

double max_abs(const RealVector& r) {
    return r.cwiseAbs().maxCoeff();
}

struct FitResult {
    RealVector v;
    double max_deviation = 0.0;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on the overlap residuals with a
/// central-difference Jacobian. The problem has an exact zero-residual
/// solution at every d we target, so the iteration runs to rounding level.
FitResult levenberg_marquardt(RealVector v, int max_iterations) {
    const int n_params = static_cast<int>(v.size());
    double lambda = 1e-3;
    RealVector r = overlap_residuals(params_to_state(v));
    double f = r.squaredNorm();
    int stale = 0;

    for (int iter = 0; iter < max_iterations && stale < 12; ++iter) {
        const int m = static_cast<int>(r.size());
        RealMatrix jac(m, n_params);
        for (int j = 0; j < n_params; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(v(j)));
            RealVector vp = v, vm = v;
            vp(j) += h;
            vm(j) -= h;
            jac.col(j) =
                (overlap_residuals(params_to_state(vp)) - overlap_residuals(params_to_state(vm))) /
                (2.0 * h);
        }
        RealMatrix normal = jac.transpose() * jac;
        RealVector gradient = jac.transpose() * r;

        bool accepted = false;
        for (int attempt = 0; attempt < 16; ++attempt) {
            RealMatrix damped = normal;
            damped.diagonal().array() += lambda;
            RealVector step = damped.ldlt().solve(-gradient);
            RealVector v_next = v + step;
            RealVector r_next = overlap_residuals(params_to_state(v_next));
            double f_next = r_next.squaredNorm();
            if (f_next < f) {
                // rescale to unit norm; the objective only sees the
                // normalized state, so this keeps the parameters conditioned
                stale = (f - f_next > 1e-14 * f) ? 0 : stale + 1;
                v = v_next / v_next.norm();
                r = overlap_residuals(params_to_state(v));
                f = r.squaredNorm();
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) break;
        if (max_abs(r) < 1e-15) break;
    }
    return {v, max_abs(r)};
}

} // namespace

StateDesign make_design(int dim, std::vector<double> weights, std::vector<PureState> states) {
    if (dim < 2) throw Error("bad_argument", "make_design: dim must be >= 2");
    if (weights.size() != states.size() || states.empty()) {
        throw Error("bad_argument", "make_design: weights and states must match and be nonempty");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error("bad_argument", "make_design: weights must be positive finite");
        }
    }
    for (const PureState& s : states) {
        if (s.dim() != dim) throw Error("dim_mismatch", "make_design: state dim mismatch");
    }
    return StateDesign{dim, std::move(weights), std::move(states)};
}

StateDesign tetrahedron_d2() {
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<PureState> states;
    states.push_back(qubit_state_from_bloch(s, s, s));
    states.push_back(qubit_state_from_bloch(-s, -s, s));
    states.push_back(qubit_state_from_bloch(s, -s, -s));
    states.push_back(qubit_state_from_bloch(-s, s, -s));
    return make_design(2, std::vector<double>(4, 0.25), std::move(states));
}

StateDesign nonuple_d3() {
    std::vector<PureState> states;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int shift = 0; shift < 3; ++shift) {
        for (int r = 0; r < 3; ++r) {
            double phase = 2.0 * std::numbers::pi * r / 3.0;
            Vector base(3);
            base(0) = inv_sqrt2;
            base(1) = inv_sqrt2 * Complex(std::cos(phase), std::sin(phase));
            base(2) = 0.0;
            Vector amps(3);
            for (int j = 0; j < 3; ++j) amps((j + shift) % 3) = base(j);
            states.emplace_back(std::move(amps));
        }
    }
    return make_design(3, std::vector<double>(9, 1.0 / 9.0), std::move(states));
}

StateDesign octahedron_d2() {
    std::vector<PureState> states;
    states.push_back(qubit_state_from_bloch(1, 0, 0));
    states.push_back(qubit_state_from_bloch(-1, 0, 0));
    states.push_back(qubit_state_from_bloch(0, 1, 0));
    states.push_back(qubit_state_from_bloch(0, -1, 0));
    states.push_back(qubit_state_from_bloch(0, 0, 1));
    states.push_back(qubit_state_from_bloch(0, 0, -1));
    return make_design(2, std::vector<double>(6, 1.0 / 6.0), std::move(states));
}

StateDesign simplex_search(int d, std::uint64_t seed, double tol) {
    SearchOptions options;
    options.tol = tol;
    return simplex_search(d, seed, options);
}

StateDesign simplex_search(int d, std::uint64_t seed, const SearchOptions& options) {
    if (d < 2) throw Error("bad_argument", "simplex_search: d must be >= 2");
    if (!(options.tol > 0.0)) throw Error("bad_argument", "simplex_search: tol must be positive");

    // Every restart in the budget is evaluated and the best residual wins
    // (ties to the lowest restart index), so the outcome does not depend on
    // the order restarts are executed in.
    double best_deviation = std::numeric_limits<double>::infinity();
    RealVector best_v;
    for (int restart = 0; restart < options.restarts; ++restart) {
        CounterRng rng(seed, static_cast<std::uint64_t>(restart));
        RealVector v(2 * d);
        for (int j = 0; j < 2 * d; ++j) v(j) = rng.next_gaussian();
        FitResult fit = levenberg_marquardt(std::move(v), options.max_iterations);
        if (fit.max_deviation < best_deviation) {
            best_deviation = fit.max_deviation;
            best_v = fit.v;
        }
    }
    if (best_deviation > options.tol) {
        throw Error("search_failed",
                    "simplex_search: best overlap deviation " + std::to_string(best_deviation) +
                        " after " + std::to_string(options.restarts) + " restarts",
                    {{"best_residual", std::to_string(best_deviation)},
                     {"restarts", std::to_string(options.restarts)}});
    }
    Vector fiducial = params_to_state(best_v);
    std::vector<PureState> states;
    states.reserve(static_cast<std::size_t>(d) * d);
    for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
            states.emplace_back(Vector(displacement(d, p, q) * fiducial));
        }
    }
    return make_design(d, std::vector<double>(static_cast<std::size_t>(d) * d, 1.0 / (d * d)),
                       std::move(states));
}

double max_residual(const DesignReport& report) {
    double worst = std::max({report.weight_sum_residual, report.first_moment_residual,
                             report.second_moment_residual, report.povm_completeness_residual});
    if (report.bloch_dot_residual) worst = std::max(worst, *report.bloch_dot_residual);
    if (report.overlap_residual) worst = std::max(worst, *report.overlap_residual);
    return worst;
}

DesignReport verify_design(const StateDesign& design, const GeneratorBasis& basis) {
    if (design.dim != basis.dim) {
        throw Error("dim_mismatch", "verify_design: design dim does not match basis dim");
    }
    const int d = design.dim;
    const int n = static_cast<int>(design.states.size());
    const int n_gen = d * d - 1;

    DesignReport report;
    report.dim = d;
    report.n_states = n;
    report.minimal = (n == d * d);

    double weight_sum = 0.0;
    for (double w : design.weights) weight_sum += w;
    report.weight_sum_residual = std::abs(weight_sum - 1.0);

    std::vector<RealVector> bloch(static_cast<std::size_t>(n));
    RealVector first = RealVector::Zero(n_gen);
    RealMatrix second = RealMatrix::Zero(n_gen, n_gen);
    Matrix povm_sum = Matrix::Zero(d, d);
    for (int r = 0; r < n; ++r) {
        DensityMatrix rho = outer(design.states[static_cast<std::size_t>(r)]);
        bloch[static_cast<std::size_t>(r)] = bloch_vector(rho, basis).components;
        const RealVector& nr = bloch[static_cast<std::size_t>(r)];
        double w = design.weights[static_cast<std::size_t>(r)];
        first += w * nr;
        second += w * nr * nr.transpose();
        povm_sum += w * static_cast<double>(d) * rho.matrix();
    }
    report.first_moment_residual = first.cwiseAbs().maxCoeff();
    RealMatrix second_target = RealMatrix::Identity(n_gen, n_gen) / static_cast<double>(n_gen);
    report.second_moment_residual = (second - second_target).cwiseAbs().maxCoeff();
    report.povm_completeness_residual = max_abs_diff(povm_sum, Matrix::Identity(d, d));

    if (report.minimal) {
        const double dot_target = -1.0 / (d * d - 1);
        const double overlap_target = 1.0 / (d + 1);
        double dot_dev = 0.0;
        double overlap_dev = 0.0;
        for (int r = 0; r < n; ++r) {
            for (int s = r + 1; s < n; ++s) {
                double dot = bloch[static_cast<std::size_t>(r)].dot(bloch[static_cast<std::size_t>(s)]);
                dot_dev = std::max(dot_dev, std::abs(dot - dot_target));
                Complex inner = design.states[static_cast<std::size_t>(r)].amplitudes().dot(
                    design.states[static_cast<std::size_t>(s)].amplitudes());
                overlap_dev = std::max(overlap_dev, std::abs(std::norm(inner) - overlap_target));
            }
        }
        report.bloch_dot_residual = dot_dev;
        report.overlap_residual = overlap_dev;
    }
    return report;
}

std::vector<Matrix> povm_elements(const StateDesign& design, const Tolerances& tol) {
    const int d = design.dim;
    if (static_cast<int>(design.states.size()) != d * d) {
        throw Error("not_minimal", "povm_elements: design must have exactly d^2 states");
    }
    const double expected_weight = 1.0 / (d * d);
    for (double w : design.weights) {
        if (std::abs(w - expected_weight) > tol.validity) {
            throw Error("not_minimal", "povm_elements: weights must all equal 1/d^2");
        }
    }
    std::vector<Matrix> elements;
    elements.reserve(design.states.size());
    for (const PureState& psi : design.states) {
        elements.push_back(outer(psi).matrix() / static_cast<double>(d));
    }
    return elements;
}

} // namespace fidelium
