#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fidelium/su_basis.hpp"
#include "fidelium/tensor.hpp"

namespace fidelium {

/// Weighted finite set of pure states {(c_r, psi_r)} meant to reproduce the
/// Haar average: weights sum to 1, Bloch vectors have zero mean and second
/// moment delta/(d^2-1). verify_design reports the residuals; nothing is
/// enforced at construction beyond shape, so defective sets stay inspectable.
struct StateDesign {
    int dim = 0;
    std::vector<double> weights;
    std::vector<PureState> states;
};

/// Shape validation: matching lengths and dims, strictly positive weights.
StateDesign make_design(int dim, std::vector<double> weights, std::vector<PureState> states);

/// Four qubit states at Bloch vectors (1,1,1)/sqrt(3), (-1,-1,1)/sqrt(3) and
/// the two cyclic component shifts of the latter; weights 1/4. Pairwise Bloch
/// dots -1/3, state overlaps 1/3.
StateDesign tetrahedron_d2();

/// Nine qutrit states (1, e^{2(r-1) pi i/3}, 0)/sqrt(2) for r = 1..3 plus the
/// two cyclic component shifts of each; weights 1/9. All pairwise overlaps
/// 1/4, and each state touches only two computational levels.
StateDesign nonuple_d3();

/// Six qubit states at Bloch vectors +-x, +-y, +-z; weights 1/6. Isotropic
/// but not minimal (6 > d^2 = 4).
StateDesign octahedron_d2();

struct SearchOptions {
    int restarts = 64;
    int max_iterations = 10000;
    double tol = 1e-8; // max overlap deviation accepted
};

/// d^2 states forming a Weyl-Heisenberg orbit {X^p Z^q |psi>} of a fiducial
/// found by random-restart least-squares on the overlap residuals
/// |<psi|X^p Z^q|psi>|^2 - 1/(d+1). Deterministic per (seed, options): all
/// restarts in the budget are evaluated and the best residual wins, ties to
/// the lowest restart index. Throws "search_failed" with the best residual
/// if no restart reaches tol.
StateDesign simplex_search(int d, std::uint64_t seed, double tol);
StateDesign simplex_search(int d, std::uint64_t seed, const SearchOptions& options);

/// Residuals of every design condition. Pairwise residuals are only defined
/// for minimal (d^2-element) designs and are absent otherwise.
struct DesignReport {
    int dim = 0;
    int n_states = 0;
    bool minimal = false;                 // exactly d^2 elements
    double weight_sum_residual = 0.0;     // |sum c_r - 1|
    double first_moment_residual = 0.0;   // max |sum c_r n_r|
    double second_moment_residual = 0.0;  // max |sum c_r n_r n_r^T - I/(d^2-1)|
    double povm_completeness_residual = 0.0; // max |sum c_r d rho_r - I|
    std::optional<double> bloch_dot_residual; // max |n_r.n_s + 1/(d^2-1)|, r != s
    std::optional<double> overlap_residual;   // max ||<psi_r|psi_s>|^2 - 1/(d+1)|, r != s
};

/// Largest residual present in the report.
double max_residual(const DesignReport& report);

DesignReport verify_design(const StateDesign& design, const GeneratorBasis& basis);

/// POVM elements O_r = rho_r / d of a minimal equal-weight design.
std::vector<Matrix> povm_elements(const StateDesign& design,
                                  const Tolerances& tol = default_tolerances());

} // namespace fidelium
