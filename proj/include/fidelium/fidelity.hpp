#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fidelium/channels.hpp"
#include "fidelium/designs.hpp"
#include "fidelium/su_basis.hpp"

namespace fidelium {

enum class Method { generators, design, povm, mc_haar, entanglement };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

/// Result of one fidelity estimate. value lies in [0, 1] up to 1e-10 of
/// rounding; std_error is present exactly for the Monte Carlo estimator.
struct FidelityReport {
    Method method = Method::generators;
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n_samples;
    std::map<std::string, std::string> metadata;
};

/// Average fidelity from the generator sum:
/// 1/d + 2/(d(d+1)) sum_a tr[T_a E(T_a)].
FidelityReport avg_fidelity_generators(const KrausChannel& e, const GeneratorBasis& basis);

/// Average fidelity as the weighted survival rate sum_r c_r tr[rho_r E(rho_r)]
/// over a verified isotropic design. The design is re-verified and the call
/// fails naming the worst residual if any isotropy condition exceeds
/// verify_tol.
FidelityReport avg_fidelity_design(const KrausChannel& e, const StateDesign& design,
                                   double verify_tol = default_tolerances().design_verify);

/// Same average written through the minimal POVM elements O_r = rho_r/d:
/// (1/d) sum_r tr[O_r E(rho_r)]. Requires a minimal equal-weight design.
FidelityReport avg_fidelity_povm_form(const KrausChannel& e, const StateDesign& design,
                                      double verify_tol = default_tolerances().design_verify);

/// Monte Carlo estimate of the Haar integral of tr[rho_psi E(rho_psi)] over
/// pure states. Counter-based sampling with fixed-size blocks: results are
/// bit-identical for any worker count.
FidelityReport mc_haar_fidelity(const KrausChannel& e, std::uint64_t n_samples,
                                std::uint64_t seed, int workers = 1);

/// Average fidelity through the entanglement fidelity of (E x id) on the
/// maximally entangled state, F = (d F_e + 1)/(d + 1). The relation is an
/// external identity used as a cross-check and flagged as such in metadata.
FidelityReport avg_fidelity_entanglement(const KrausChannel& e);

struct EstimatorParams {
    Method method = Method::generators;
    const StateDesign* design = nullptr; // required for design / povm
    std::uint64_t n_samples = 100000;    // mc_haar only
    std::uint64_t seed = 0;              // mc_haar only
    int workers = 1;                     // mc_haar only
    double design_verify_tol = default_tolerances().design_verify;
};

/// Gate fidelity against a target unitary u, evaluated by reducing to the
/// channel rho -> E(u+ rho u) and dispatching the chosen estimator.
FidelityReport gate_fidelity(const KrausChannel& e, const Matrix& u,
                             const EstimatorParams& params);

} // namespace fidelium
