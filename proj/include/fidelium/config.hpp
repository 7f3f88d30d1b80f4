#pragma once

namespace fidelium {

// Central tolerance knobs. Two tiers: validity checks on stored data (1e-12)
// and derived-property checks that accumulate a few rounding steps (1e-10).
struct Tolerances {
    double validity = 1e-12;     // normalization, Hermiticity, unit trace
    double derived = 1e-10;      // unitarity, trace preservation, orthogonality
    double psd_floor = -1e-10;   // eigenvalue floor for density matrices
    double design_verify = 1e-8; // residual gate before design-based estimators
    double tp_load = 1e-8;       // trace-preservation gate for channel files
    double search = 1e-8;        // max overlap deviation for simplex_search
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

} // namespace fidelium
