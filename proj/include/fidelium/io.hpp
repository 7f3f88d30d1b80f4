#pragma once

#include <string>

#include <json.hpp>

#include "fidelium/channels.hpp"
#include "fidelium/designs.hpp"
#include "fidelium/fidelity.hpp"
#include "fidelium/haar.hpp"
#include "fidelium/su_basis.hpp"

namespace fidelium::io {

using nlohmann::json;

// Complex numbers are two-element arrays [re, im]; matrices are row-major
// nested arrays of such pairs; states are flat arrays of pairs.

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json state_to_json(const PureState& psi);
PureState state_from_json(const json& j);

/// Channel file: { "dim": d, "kraus": [matrix, ...] }. Loading validates
/// trace preservation at tp_tol.
json channel_to_json(const KrausChannel& e);
KrausChannel channel_from_json(const json& j, double tp_tol = default_tolerances().tp_load);

/// Design file: { "dim": d, "weights": [...], "states": [state, ...] }.
json design_to_json(const StateDesign& design);
StateDesign design_from_json(const json& j);

/// Gate file: { "dim": d, "matrix": matrix }, validated unitary.
json gate_to_json(const Matrix& u);
Matrix gate_from_json(const json& j, const Tolerances& tol = default_tolerances());

json basis_to_json(const GeneratorBasis& basis);

json fidelity_report_to_json(const FidelityReport& report);
json design_report_to_json(const DesignReport& report);
json orthogonality_report_to_json(const OrthogonalityReport& report);

json error_to_json(const Error& err);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Canonical serialization used for every document the tools emit: 2-space
/// indent, sorted object keys (nlohmann default), trailing newline.
std::string dump_json(const json& j);

} // namespace fidelium::io
