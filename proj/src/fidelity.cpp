#include "fidelium/fidelity.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "fidelium/haar.hpp"

namespace fidelium {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

FidelityReport make_report(Method method, double value, std::optional<double> std_error,
                           std::optional<std::uint64_t> n_samples,
                           std::map<std::string, std::string> metadata) {
    if (!(value >= -1e-10 && value <= 1.0 + 1e-10)) {
        throw Error("value_out_of_range",
                    "fidelity value " + format_double(value) + " outside [0, 1]");
    }
    if (std_error.has_value() != (method == Method::mc_haar)) {
        throw Error("internal", "std_error must be present exactly for the mc_haar method");
    }
    return FidelityReport{method, value, std_error, n_samples, std::move(metadata)};
}

/// Gate applied before a design/povm estimate: the three isotropy residuals
/// are what the discrete-average identity needs; the minimal-set pairwise
/// residuals are reported by verify_design but not required here.
void require_verified(const DesignReport& report, double verify_tol) {
    struct Named {
        const char* name;
        double value;
    };
    const Named checks[] = {
        {"weight_sum", report.weight_sum_residual},
        {"first_moment", report.first_moment_residual},
        {"second_moment", report.second_moment_residual},
    };
    for (const Named& check : checks) {
        if (check.value > verify_tol) {
            throw Error("design_invalid",
                        std::string("design verification failed: ") + check.name +
                            " residual " + format_double(check.value) + " exceeds " +
                            format_double(verify_tol),
                        {{"residual", check.name}, {"value", format_double(check.value)}});
        }
    }
}

} // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::generators: return "generators";
        case Method::design: return "design";
        case Method::povm: return "povm";
        case Method::mc_haar: return "mc_haar";
        case Method::entanglement: return "entanglement";
    }
    throw Error("internal", "unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "generators") return Method::generators;
    if (name == "design") return Method::design;
    if (name == "povm") return Method::povm;
    if (name == "mc" || name == "mc_haar") return Method::mc_haar;
    if (name == "entanglement") return Method::entanglement;
    throw Error("bad_argument", "unknown fidelity method '" + name + "'");
}

FidelityReport avg_fidelity_generators(const KrausChannel& e, const GeneratorBasis& basis) {
    if (e.dim() != basis.dim) {
        throw Error("dim_mismatch", "avg_fidelity_generators: channel dim " +
                                        std::to_string(e.dim()) + " vs basis dim " +
                                        std::to_string(basis.dim));
    }
    const int d = e.dim();
    double sum = 0.0;
    for (const Matrix& t : basis.generators) {
        sum += trace_product(t, e.apply_raw(t)).real();
    }
    double value = 1.0 / d + 2.0 / (d * (d + 1.0)) * sum;
    return make_report(Method::generators, value, std::nullopt, std::nullopt,
                       {{"dim", std::to_string(d)}});
}

FidelityReport avg_fidelity_design(const KrausChannel& e, const StateDesign& design,
                                   double verify_tol) {
    if (e.dim() != design.dim) {
        throw Error("dim_mismatch", "avg_fidelity_design: channel dim does not match design");
    }
    GeneratorBasis basis = gell_mann_basis(design.dim);
    DesignReport report = verify_design(design, basis);
    require_verified(report, verify_tol);

    double value = 0.0;
    for (std::size_t r = 0; r < design.states.size(); ++r) {
        Matrix rho = outer(design.states[r]).matrix();
        value += design.weights[r] * trace_product(rho, e.apply_raw(rho)).real();
    }
    return make_report(Method::design, value, std::nullopt, std::nullopt,
                       {{"dim", std::to_string(design.dim)},
                        {"n_states", std::to_string(design.states.size())},
                        {"design_max_residual", format_double(max_residual(report))}});
}

FidelityReport avg_fidelity_povm_form(const KrausChannel& e, const StateDesign& design,
                                      double verify_tol) {
    if (e.dim() != design.dim) {
        throw Error("dim_mismatch", "avg_fidelity_povm_form: channel dim does not match design");
    }
    GeneratorBasis basis = gell_mann_basis(design.dim);
    DesignReport report = verify_design(design, basis);
    require_verified(report, verify_tol);

    const int d = design.dim;
    std::vector<Matrix> elements = povm_elements(design); // rejects non-minimal designs
    double value = 0.0;
    for (std::size_t r = 0; r < elements.size(); ++r) {
        Matrix rho = outer(design.states[r]).matrix();
        value += trace_product(elements[r], e.apply_raw(rho)).real();
    }
    value /= d;
    return make_report(Method::povm, value, std::nullopt, std::nullopt,
                       {{"dim", std::to_string(d)},
                        {"n_states", std::to_string(design.states.size())},
                        {"design_max_residual", format_double(max_residual(report))}});
}

FidelityReport mc_haar_fidelity(const KrausChannel& e, std::uint64_t n_samples,
                                std::uint64_t seed, int workers) {
    if (n_samples < 100) {
        throw Error("bad_argument", "mc_haar_fidelity: need at least 100 samples");
    }
    if (workers < 1) workers = 1;
    const int d = e.dim();

    const std::uint64_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sum_sq(n_blocks, 0.0);

    std::atomic<std::uint64_t> next_block{0};
    auto run_blocks = [&] {
        for (;;) {
            std::uint64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            double sum = 0.0;
            double sum_sq = 0.0;
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t end = std::min(n_samples, begin + kBlockSize);
            SampleStream stream{seed, begin, d};
            for (std::uint64_t i = begin; i < end; ++i) {
                Vector psi = sample_pure_state(stream).amplitudes();
                Matrix rho = psi * psi.adjoint();
                // tr[rho E(rho)] = <psi| E(rho) |psi>
                double survival = psi.dot(e.apply_raw(rho) * psi).real();
                sum += survival;
                sum_sq += survival * survival;
            }
            block_sum[b] = sum;
            block_sum_sq[b] = sum_sq;
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

    double total = 0.0;
    double total_sq = 0.0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        total += block_sum[b];
        total_sq += block_sum_sq[b];
    }
    const double n = static_cast<double>(n_samples);
    double mean = total / n;
    double variance = std::max(0.0, (total_sq - n * mean * mean) / (n - 1.0));
    double std_error = std::sqrt(variance / n);
    return make_report(Method::mc_haar, mean, std_error, n_samples,
                       {{"dim", std::to_string(d)}, {"seed", std::to_string(seed)}});
}

FidelityReport avg_fidelity_entanglement(const KrausChannel& e) {
    const int d = e.dim();
    PureState phi = maximally_entangled(d);
    DensityMatrix evolved = apply_extended(e, outer(phi));
    double f_e = phi.amplitudes().dot(evolved.matrix() * phi.amplitudes()).real();
    double value = (d * f_e + 1.0) / (d + 1.0);
    return make_report(Method::entanglement, value, std::nullopt, std::nullopt,
                       {{"dim", std::to_string(d)},
                        {"entanglement_fidelity", format_double(f_e)},
                        {"relation", "external identity"}});
}

FidelityReport gate_fidelity(const KrausChannel& e, const Matrix& u,
                             const EstimatorParams& params) {
    KrausChannel reduced = precompose_gate(e, u);
    FidelityReport report;
    switch (params.method) {
        case Method::generators:
            report = avg_fidelity_generators(reduced, gell_mann_basis(reduced.dim()));
            break;
        case Method::design:
            if (params.design == nullptr) {
                throw Error("bad_argument", "gate_fidelity: design method requires a design");
            }
            report = avg_fidelity_design(reduced, *params.design, params.design_verify_tol);
            break;
        case Method::povm:
            if (params.design == nullptr) {
                throw Error("bad_argument", "gate_fidelity: povm method requires a design");
            }
            report = avg_fidelity_povm_form(reduced, *params.design, params.design_verify_tol);
            break;
        case Method::mc_haar:
            report = mc_haar_fidelity(reduced, params.n_samples, params.seed, params.workers);
            break;
        case Method::entanglement:
            report = avg_fidelity_entanglement(reduced);
            break;
    }
    report.metadata["gate"] = "precomposed";
    return report;
}

} // namespace fidelium
