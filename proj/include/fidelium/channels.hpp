#pragma once

#include <cstdint>
#include <vector>

#include "fidelium/tensor.hpp"

namespace fidelium {

/// Trace-preserving linear map in Kraus form, E(rho) = sum_i K_i rho K_i+.
/// Construction validates sum_i K_i+ K_i = identity within tp_tol.
class KrausChannel {
public:
    KrausChannel(int dim, std::vector<Matrix> kraus_ops, double tp_tol = 1e-10);

    int dim() const { return dim_; }
    const std::vector<Matrix>& kraus_ops() const { return kraus_ops_; }

    /// Kraus sum applied to an arbitrary d x d matrix. The map extends
    /// linearly beyond density matrices (generator-formula inputs are
    /// traceless Hermitian, not states).
    Matrix apply_raw(const Matrix& m) const;

    /// Largest absolute entry of sum K+K - identity.
    double trace_preservation_residual() const;

private:
    int dim_;
    std::vector<Matrix> kraus_ops_;
};

DensityMatrix apply(const KrausChannel& e, const DensityMatrix& rho);

/// (E x id) on a bipartite d^2-dimensional state, E acting on the first
/// factor via Kraus operators K_i x identity.
DensityMatrix apply_extended(const KrausChannel& e, const DensityMatrix& rho);

/// Channel with action (1-p) rho + p tr(rho) identity/d, realized by the
/// Weyl displacement Kraus set.
KrausChannel depolarizing(int d, double p);

/// Channel with action (1-p) rho + p diag(rho), realized by the clock
/// operator Kraus set. At d = 2, p = 1 this is full qubit dephasing.
KrausChannel dephasing(int d, double p);

KrausChannel unitary_channel(const Matrix& v, const Tolerances& tol = default_tolerances());

/// k Kraus operators sliced from a Haar-random (k d) x d isometry built by
/// orthonormalizing the columns of an iid complex Gaussian matrix.
/// Deterministic in seed.
KrausChannel random_channel(int d, int k, std::uint64_t seed);

/// Channel rho -> E(U+ rho U), i.e. Kraus operators K_i U+. Reduces gate
/// fidelity against U to channel fidelity against the identity.
KrausChannel precompose_gate(const KrausChannel& e, const Matrix& u,
                             const Tolerances& tol = default_tolerances());

} // namespace fidelium
