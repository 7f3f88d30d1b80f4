// fidelium command-line front end: generate and verify state designs, build
// channels, run fidelity estimators and self-tests. Every command prints one
// JSON document on stdout. Exit codes: 0 success, 1 domain error (a JSON
// error object is printed), 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fidelium/fidelity.hpp"
#include "fidelium/haar.hpp"
#include "fidelium/io.hpp"

namespace {

using namespace fidelium;
using fidelium::io::json;

struct SelftestCheck {
    std::string name;
    double residual;
    double bound;
};

json run_selftest_all(int dim, std::uint64_t seed, std::uint64_t samples, int workers) {
    std::vector<SelftestCheck> checks;

    GeneratorBasis basis = gell_mann_basis(dim);

    // group orthogonality via Monte Carlo
    OrthogonalityReport orth = mc_orthogonality_check(dim, samples, seed, workers);
    double orth_bound = 5.0 * orth.standard_error_scale;
    checks.push_back({"orthogonality_first_moment", orth.first_moment_residual, orth_bound});
    checks.push_back({"orthogonality_second_moment", orth.second_moment_residual, orth_bound});

    // design certification (exact constructions where available, else search)
    StateDesign design = dim == 2   ? tetrahedron_d2()
                         : dim == 3 ? nonuple_d3()
                                    : simplex_search(dim, seed, default_tolerances().search);
    DesignReport design_report = verify_design(design, basis);
    double design_bound = dim <= 3 ? 1e-12 : default_tolerances().search;
    checks.push_back({"design_certification", max_residual(design_report), design_bound});

    // estimator agreement on random channels
    double equiv_dev = 0.0;
    double ent_dev = 0.0;
    double povm_dev = 0.0;
    const int kraus_counts[] = {1, dim, dim * dim};
    for (int i = 0; i < 12; ++i) {
        KrausChannel channel = random_channel(dim, kraus_counts[i % 3], seed + 100 + i);
        double f_gen = avg_fidelity_generators(channel, basis).value;
        double f_design = avg_fidelity_design(channel, design).value;
        double f_povm = avg_fidelity_povm_form(channel, design).value;
        double f_ent = avg_fidelity_entanglement(channel).value;
        equiv_dev = std::max(equiv_dev, std::abs(f_gen - f_design));
        povm_dev = std::max(povm_dev, std::abs(f_design - f_povm));
        ent_dev = std::max(ent_dev, std::abs(f_gen - f_ent));
    }
    checks.push_back({"generators_vs_design", equiv_dev, 1e-10});
    checks.push_back({"design_vs_povm_form", povm_dev, 1e-14});
    checks.push_back({"generators_vs_entanglement", ent_dev, 1e-10});

    // closed-form channels
    double closed_dev = 0.0;
    for (double p : {0.0, 0.25, 0.5, 1.0}) {
        double expected = 1.0 - p * (dim - 1) / dim;
        double got = avg_fidelity_generators(depolarizing(dim, p), basis).value;
        closed_dev = std::max(closed_dev, std::abs(got - expected));
    }
    checks.push_back({"depolarizing_closed_form", closed_dev, 1e-12});

    // Monte Carlo agreement with the generator formula
    KrausChannel probe = random_channel(dim, dim, seed + 7);
    FidelityReport mc = mc_haar_fidelity(probe, samples, seed + 8, workers);
    double mc_gap = std::abs(mc.value - avg_fidelity_generators(probe, basis).value);
    checks.push_back({"mc_haar_vs_generators", mc_gap, 5.0 * mc.std_error.value()});

    bool all_pass = true;
    json check_list = json::array();
    for (const SelftestCheck& c : checks) {
        bool pass = c.residual <= c.bound;
        all_pass = all_pass && pass;
        check_list.push_back(
            json{{"name", c.name}, {"residual", c.residual}, {"bound", c.bound}, {"pass", pass}});
    }
    return json{{"dim", dim},
                {"seed", seed},
                {"n_samples", samples},
                {"checks", std::move(check_list)},
                {"pass", all_pass}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"average gate fidelity of qudit channels: estimators, state "
                 "designs, and self-tests"};
    app.require_subcommand(1);

    // basis
    auto* basis_cmd = app.add_subcommand("basis", "dump the generator basis of SU(d) as JSON");
    int basis_dim = 2;
    basis_cmd->add_option("--dim", basis_dim, "Hilbert space dimension")->required()->check(CLI::Range(2, 1024));

    // design gen / design verify
    auto* design_cmd = app.add_subcommand("design", "generate or verify state designs");
    design_cmd->require_subcommand(1);
    auto* design_gen = design_cmd->add_subcommand("gen", "generate a design file");
    int design_dim = 2;
    std::string design_method = "auto";
    std::uint64_t design_seed = 0;
    double design_tol = default_tolerances().search;
    std::string design_out;
    design_gen->add_option("--dim", design_dim, "Hilbert space dimension")->required()->check(CLI::Range(2, 1024));
    design_gen->add_option("--method", design_method, "exact|search (default: exact for d=2,3)")
        ->check(CLI::IsMember({"auto", "exact", "search"}));
    design_gen->add_option("--seed", design_seed, "search seed")->envname("FIDELIUM_SEED");
    design_gen->add_option("--tol", design_tol, "max overlap deviation for the search")->check(CLI::PositiveNumber);
    design_gen->add_option("-o,--output", design_out, "output file")->required();

    auto* design_verify = design_cmd->add_subcommand("verify", "verify a design file");
    std::string design_in;
    design_verify->add_option("file", design_in, "design file")->required();

    // channel-gen
    auto* channel_cmd = app.add_subcommand("channel-gen", "write a channel file");
    std::string channel_kind;
    int channel_dim = 2;
    double channel_p = 0.0;
    int channel_k = 1;
    std::uint64_t channel_seed = 0;
    std::string channel_out;
    channel_cmd->add_option("--kind", channel_kind, "channel family")
        ->required()
        ->check(CLI::IsMember({"depolarizing", "dephasing", "unitary-random", "kraus-random"}));
    channel_cmd->add_option("--dim", channel_dim, "Hilbert space dimension")->required()->check(CLI::Range(2, 1024));
    channel_cmd->add_option("--p", channel_p, "noise strength in [0, 1]");
    channel_cmd->add_option("--k", channel_k, "number of Kraus operators (kraus-random)");
    channel_cmd->add_option("--seed", channel_seed, "sampling seed")->envname("FIDELIUM_SEED");
    channel_cmd->add_option("-o,--output", channel_out, "output file")->required();

    // fidelity
    auto* fidelity_cmd = app.add_subcommand("fidelity", "estimate average (gate) fidelity");
    std::string fid_channel;
    std::string fid_gate;
    std::string fid_method;
    std::string fid_design;
    std::uint64_t fid_samples = 100000;
    std::uint64_t fid_seed = 0;
    int fid_workers = 1;
    double fid_tp_tol = default_tolerances().tp_load;
    double fid_design_tol = default_tolerances().design_verify;
    fidelity_cmd->add_option("--channel", fid_channel, "channel file")->required();
    fidelity_cmd->add_option("--gate", fid_gate, "target gate file (default: identity)");
    fidelity_cmd->add_option("--method", fid_method, "estimator")
        ->required()
        ->check(CLI::IsMember({"generators", "design", "povm", "mc", "entanglement"}));
    fidelity_cmd->add_option("--design", fid_design, "design file (design/povm methods)");
    fidelity_cmd->add_option("--samples", fid_samples, "Monte Carlo sample count");
    fidelity_cmd->add_option("--seed", fid_seed, "Monte Carlo seed")->envname("FIDELIUM_SEED");
    fidelity_cmd->add_option("--workers", fid_workers, "Monte Carlo worker threads");
    fidelity_cmd->add_option("--tp-tol", fid_tp_tol, "trace-preservation load tolerance")->check(CLI::PositiveNumber);
    fidelity_cmd->add_option("--design-tol", fid_design_tol, "design verification tolerance")->check(CLI::PositiveNumber);

    // selftest orthogonality / selftest all
    auto* selftest_cmd = app.add_subcommand("selftest", "statistical and algebraic self-tests");
    selftest_cmd->require_subcommand(1);
    auto* selftest_orth = selftest_cmd->add_subcommand(
        "orthogonality", "Monte Carlo residuals of the adjoint orthogonality relations");
    int st_dim = 2;
    std::uint64_t st_samples = 100000;
    std::uint64_t st_seed = 0;
    int st_workers = 1;
    selftest_orth->add_option("--dim", st_dim, "Hilbert space dimension")->required()->check(CLI::Range(2, 1024));
    selftest_orth->add_option("--samples", st_samples, "sample count");
    selftest_orth->add_option("--seed", st_seed, "sampling seed")->envname("FIDELIUM_SEED");
    selftest_orth->add_option("--workers", st_workers, "worker threads");

    auto* selftest_all = selftest_cmd->add_subcommand("all", "bundled cross-estimator checks");
    int sta_dim = 2;
    std::uint64_t sta_seed = 0;
    std::uint64_t sta_samples = 20000;
    int sta_workers = 1;
    selftest_all->add_option("--dim", sta_dim, "Hilbert space dimension")->required()->check(CLI::Range(2, 1024));
    selftest_all->add_option("--seed", sta_seed, "seed")->envname("FIDELIUM_SEED");
    selftest_all->add_option("--samples", sta_samples, "Monte Carlo sample count");
    selftest_all->add_option("--workers", sta_workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (basis_cmd->parsed()) {
            if (basis_dim < 2) throw Error("bad_argument", "basis: --dim must be >= 2");
            std::cout << io::dump_json(io::basis_to_json(gell_mann_basis(basis_dim)));
        } else if (design_gen->parsed()) {
            if (design_dim < 2) throw Error("bad_argument", "design gen: --dim must be >= 2");
            if (design_method == "auto") {
                design_method = (design_dim == 2 || design_dim == 3) ? "exact" : "search";
            }
            StateDesign design;
            if (design_method == "exact") {
                if (design_dim == 2) {
                    design = tetrahedron_d2();
                } else if (design_dim == 3) {
                    design = nonuple_d3();
                } else {
                    throw Error("bad_argument",
                                "design gen: no exact construction for d = " +
                                    std::to_string(design_dim) + "; use --method search");
                }
            } else {
                design = simplex_search(design_dim, design_seed, design_tol);
            }
            io::write_json_file(design_out, io::design_to_json(design));
            GeneratorBasis basis = gell_mann_basis(design_dim);
            json report = io::design_report_to_json(verify_design(design, basis));
            report["file"] = design_out;
            report["method"] = design_method;
            std::cout << io::dump_json(report);
        } else if (design_verify->parsed()) {
            StateDesign design = io::design_from_json(io::load_json_file(design_in));
            GeneratorBasis basis = gell_mann_basis(design.dim);
            json report = io::design_report_to_json(verify_design(design, basis));
            report["file"] = design_in;
            std::cout << io::dump_json(report);
        } else if (channel_cmd->parsed()) {
            if (channel_dim < 2) throw Error("bad_argument", "channel-gen: --dim must be >= 2");
            std::optional<KrausChannel> channel;
            if (channel_kind == "depolarizing") {
                channel = depolarizing(channel_dim, channel_p);
            } else if (channel_kind == "dephasing") {
                channel = dephasing(channel_dim, channel_p);
            } else if (channel_kind == "unitary-random") {
                SampleStream stream{channel_seed, 0, channel_dim};
                channel = unitary_channel(sample_unitary(stream));
            } else {
                channel = random_channel(channel_dim, channel_k, channel_seed);
            }
            io::write_json_file(channel_out, io::channel_to_json(*channel));
            std::cout << io::dump_json(
                json{{"file", channel_out},
                     {"kind", channel_kind},
                     {"dim", channel_dim},
                     {"kraus_count", channel->kraus_ops().size()},
                     {"tp_residual", channel->trace_preservation_residual()}});
        } else if (fidelity_cmd->parsed()) {
            KrausChannel channel = io::channel_from_json(io::load_json_file(fid_channel), fid_tp_tol);
            std::optional<StateDesign> design;
            EstimatorParams params;
            params.method = method_from_name(fid_method);
            params.n_samples = fid_samples;
            params.seed = fid_seed;
            params.workers = fid_workers;
            params.design_verify_tol = fid_design_tol;
            if (params.method == Method::design || params.method == Method::povm) {
                if (fid_design.empty()) {
                    throw Error("bad_argument",
                                "fidelity: --design is required for the " + fid_method + " method");
                }
                design = io::design_from_json(io::load_json_file(fid_design));
                params.design = &*design;
            }
            Matrix gate = fid_gate.empty()
                              ? Matrix(Matrix::Identity(channel.dim(), channel.dim()))
                              : io::gate_from_json(io::load_json_file(fid_gate));
            FidelityReport report = gate_fidelity(channel, gate, params);
            report.metadata["channel_file"] = fid_channel;
            if (!fid_gate.empty()) report.metadata["gate_file"] = fid_gate;
            if (!fid_design.empty()) report.metadata["design_file"] = fid_design;
            std::cout << io::dump_json(io::fidelity_report_to_json(report));
        } else if (selftest_orth->parsed()) {
            OrthogonalityReport report = mc_orthogonality_check(st_dim, st_samples, st_seed, st_workers);
            std::cout << io::dump_json(io::orthogonality_report_to_json(report));
        } else if (selftest_all->parsed()) {
            json report = run_selftest_all(sta_dim, sta_seed, sta_samples, sta_workers);
            bool pass = report["pass"].get<bool>();
            std::cout << io::dump_json(report);
            return pass ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cout << io::dump_json(io::error_to_json(e));
        return 1;
    } catch (const std::exception& e) {
        std::cout << io::dump_json(
            json{{"code", "internal"}, {"message", e.what()}, {"context", json::object()}});
        return 1;
    }
    return 0;
}
