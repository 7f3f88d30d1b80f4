#include "fidelium/channels.hpp"

#include <cmath>

#include "fidelium/haar.hpp"

namespace fidelium {

KrausChannel::KrausChannel(int dim, std::vector<Matrix> kraus_ops, double tp_tol)
    : dim_(dim), kraus_ops_(std::move(kraus_ops)) {
    if (dim_ < 1) throw Error("bad_argument", "KrausChannel: dim must be positive");
    if (kraus_ops_.empty()) throw Error("bad_argument", "KrausChannel: empty Kraus list");
    for (const Matrix& k : kraus_ops_) {
        if (k.rows() != dim_ || k.cols() != dim_) {
            throw Error("dim_mismatch", "KrausChannel: Kraus operator is not d x d");
        }
        if (!k.allFinite()) throw Error("not_finite", "KrausChannel: non-finite entry");
    }
    double residual = trace_preservation_residual();
    if (residual > tp_tol) {
        throw Error("not_trace_preserving",
                    "KrausChannel: sum K+K deviates from identity by " + std::to_string(residual),
                    {{"residual", std::to_string(residual)}});
    }
}

Matrix KrausChannel::apply_raw(const Matrix& m) const {
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw Error("dim_mismatch", "apply_raw: matrix is not d x d");
    }
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const Matrix& k : kraus_ops_) out += k * m * k.adjoint();
    return out;
}

double KrausChannel::trace_preservation_residual() const {
    Matrix gram = Matrix::Zero(dim_, dim_);
    for (const Matrix& k : kraus_ops_) gram += k.adjoint() * k;
    return max_abs_diff(gram, Matrix::Identity(dim_, dim_));
}

DensityMatrix apply(const KrausChannel& e, const DensityMatrix& rho) {
    if (e.dim() != rho.dim()) {
        throw Error("dim_mismatch", "apply: channel dim " + std::to_string(e.dim()) +
                                        " vs state dim " + std::to_string(rho.dim()));
    }
    return DensityMatrix(e.apply_raw(rho.matrix()));
}

DensityMatrix apply_extended(const KrausChannel& e, const DensityMatrix& rho) {
    const int d = e.dim();
    if (rho.dim() != d * d) {
        throw Error("dim_mismatch",
                    "apply_extended: state dim must be d^2 = " + std::to_string(d * d));
    }
    Matrix out = Matrix::Zero(d * d, d * d);
    Matrix eye = Matrix::Identity(d, d);
    for (const Matrix& k : e.kraus_ops()) {
        Matrix lifted = kron(k, eye);
        out += lifted * rho.matrix() * lifted.adjoint();
    }
    return DensityMatrix(std::move(out));
}

KrausChannel depolarizing(int d, double p) {
    if (d < 2) throw Error("bad_argument", "depolarizing: d must be >= 2");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("bad_argument", "depolarizing: p must lie in [0, 1]");
    }
    // Averaging over all d^2 displacements sends rho to tr(rho) identity/d,
    // so (1-p) rho + p tr(rho)/d is Kraus-realized by
    //   sqrt(1 - p + p/d^2) identity  and  (sqrt(p)/d) X^a Z^b, (a,b) != (0,0).
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(d) * d);
    kraus.push_back(std::sqrt(1.0 - p + p / (d * d)) * Matrix::Identity(d, d));
    double weight = std::sqrt(p) / d;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (a == 0 && b == 0) continue;
            if (weight == 0.0) continue;
            kraus.push_back(weight * displacement(d, a, b));
        }
    }
    return KrausChannel(d, std::move(kraus));
}

KrausChannel dephasing(int d, double p) {
    if (d < 2) throw Error("bad_argument", "dephasing: d must be >= 2");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("bad_argument", "dephasing: p must lie in [0, 1]");
    }
    // Averaging over clock powers projects onto the diagonal:
    // sum_q Z^q rho Z^-q = d diag(rho).
    std::vector<Matrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
    double weight = std::sqrt(p / d);
    if (weight > 0.0) {
        for (int q = 0; q < d; ++q) kraus.push_back(weight * displacement(d, 0, q));
    }
    return KrausChannel(d, std::move(kraus));
}

KrausChannel unitary_channel(const Matrix& v, const Tolerances& tol) {
    if (!is_unitary(v, tol.derived)) {
        throw Error("not_unitary", "unitary_channel: input is not unitary within tolerance");
    }
    return KrausChannel(static_cast<int>(v.rows()), {v});
}

KrausChannel random_channel(int d, int k, std::uint64_t seed) {
    if (d < 2) throw Error("bad_argument", "random_channel: d must be >= 2");
    if (k < 1) throw Error("bad_argument", "random_channel: k must be >= 1");
    CounterRng rng(seed, 0);
    Matrix isometry = orthonormalize_columns(gaussian_matrix(rng, k * d, d));
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) kraus.push_back(isometry.middleRows(i * d, d));
    return KrausChannel(d, std::move(kraus));
}

KrausChannel precompose_gate(const KrausChannel& e, const Matrix& u, const Tolerances& tol) {
    if (u.rows() != e.dim() || u.cols() != e.dim()) {
        throw Error("dim_mismatch", "precompose_gate: gate does not match channel dim");
    }
    if (!is_unitary(u, tol.derived)) {
        throw Error("not_unitary", "precompose_gate: gate is not unitary within tolerance");
    }
    std::vector<Matrix> kraus;
    kraus.reserve(e.kraus_ops().size());
    for (const Matrix& k : e.kraus_ops()) kraus.push_back(k * u.adjoint());
    return KrausChannel(e.dim(), std::move(kraus));
}

} // namespace fidelium
