#include "fidelium/io.hpp"

#include <fstream>

namespace fidelium::io {

namespace {

double number_from_json(const json& j, const char* what) {
    if (!j.is_number()) throw Error("parse", std::string(what) + ": expected a number");
    return j.get<double>();
}

} // namespace

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw Error("parse", "complex value: expected [re, im]");
    }
    return {number_from_json(j[0], "complex re"), number_from_json(j[1], "complex im")};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("parse", "matrix: expected nonempty array of rows");
    const auto n_rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) throw Error("parse", "matrix: rows must be arrays");
    const auto n_cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_array() ||
            static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != n_cols) {
            throw Error("parse", "matrix: ragged rows");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            m(i, c) = complex_from_json(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

json state_to_json(const PureState& psi) {
    json amps = json::array();
    for (Eigen::Index j = 0; j < psi.amplitudes().size(); ++j) {
        amps.push_back(complex_to_json(psi.amplitudes()(j)));
    }
    return amps;
}

PureState state_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("parse", "state: expected nonempty array");
    Vector amps(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        amps(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return PureState(std::move(amps));
}

json channel_to_json(const KrausChannel& e) {
    json kraus = json::array();
    for (const Matrix& k : e.kraus_ops()) kraus.push_back(matrix_to_json(k));
    return json{{"dim", e.dim()}, {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_json(const json& j, double tp_tol) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("kraus")) {
        throw Error("parse", "channel: expected { dim, kraus }");
    }
    if (!j["dim"].is_number_integer()) throw Error("parse", "channel: dim must be an integer");
    int dim = j["dim"].get<int>();
    if (!j["kraus"].is_array() || j["kraus"].empty()) {
        throw Error("parse", "channel: kraus must be a nonempty array");
    }
    std::vector<Matrix> kraus;
    kraus.reserve(j["kraus"].size());
    for (const json& k : j["kraus"]) kraus.push_back(matrix_from_json(k));
    return KrausChannel(dim, std::move(kraus), tp_tol);
}

json design_to_json(const StateDesign& design) {
    json states = json::array();
    for (const PureState& psi : design.states) states.push_back(state_to_json(psi));
    return json{{"dim", design.dim}, {"weights", design.weights}, {"states", std::move(states)}};
}

StateDesign design_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("weights") || !j.contains("states")) {
        throw Error("parse", "design: expected { dim, weights, states }");
    }
    if (!j["dim"].is_number_integer()) throw Error("parse", "design: dim must be an integer");
    int dim = j["dim"].get<int>();
    if (!j["weights"].is_array() || !j["states"].is_array()) {
        throw Error("parse", "design: weights and states must be arrays");
    }
    std::vector<double> weights;
    for (const json& w : j["weights"]) weights.push_back(number_from_json(w, "design weight"));
    std::vector<PureState> states;
    for (const json& s : j["states"]) states.push_back(state_from_json(s));
    return make_design(dim, std::move(weights), std::move(states));
}

json gate_to_json(const Matrix& u) {
    return json{{"dim", static_cast<int>(u.rows())}, {"matrix", matrix_to_json(u)}};
}

Matrix gate_from_json(const json& j, const Tolerances& tol) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix")) {
        throw Error("parse", "gate: expected { dim, matrix }");
    }
    Matrix u = matrix_from_json(j["matrix"]);
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() != u.rows()) {
        throw Error("parse", "gate: dim does not match matrix");
    }
    if (!is_unitary(u, tol.derived)) {
        throw Error("not_unitary", "gate: matrix is not unitary within tolerance");
    }
    return u;
}

json basis_to_json(const GeneratorBasis& basis) {
    json generators = json::array();
    for (const Matrix& t : basis.generators) generators.push_back(matrix_to_json(t));
    return json{{"dim", basis.dim}, {"k_d", basis.k_d}, {"generators", std::move(generators)}};
}

json fidelity_report_to_json(const FidelityReport& report) {
    json j{{"method", method_name(report.method)},
           {"value", report.value},
           {"metadata", report.metadata}};
    if (report.std_error) j["std_error"] = *report.std_error;
    if (report.n_samples) j["n_samples"] = *report.n_samples;
    return j;
}

json design_report_to_json(const DesignReport& report) {
    json residuals{{"weight_sum", report.weight_sum_residual},
                   {"first_moment", report.first_moment_residual},
                   {"second_moment", report.second_moment_residual},
                   {"povm_completeness", report.povm_completeness_residual}};
    if (report.bloch_dot_residual) residuals["bloch_dot"] = *report.bloch_dot_residual;
    if (report.overlap_residual) residuals["overlap"] = *report.overlap_residual;
    return json{{"dim", report.dim},
                {"n_states", report.n_states},
                {"minimal", report.minimal},
                {"residuals", std::move(residuals)},
                {"max_residual", max_residual(report)}};
}

json orthogonality_report_to_json(const OrthogonalityReport& report) {
    return json{{"dim", report.dim},
                {"n_samples", report.n_samples},
                {"seed", report.seed},
                {"first_moment_residual", report.first_moment_residual},
                {"second_moment_residual", report.second_moment_residual},
                {"standard_error_scale", report.standard_error_scale}};
}

json error_to_json(const Error& err) {
    return json{{"code", err.code()}, {"message", err.what()}, {"context", err.context()}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("parse", "invalid JSON in file: " + path);
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write file: " + path);
    out << dump_json(j);
    if (!out) throw Error("io", "write failed: " + path);
}

std::string dump_json(const json& j) {
    return j.dump(2) + "\n";
}

} // namespace fidelium::io
