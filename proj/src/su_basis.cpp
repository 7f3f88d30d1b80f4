#include "fidelium/su_basis.hpp"

#include <cmath>

namespace fidelium {

GeneratorBasis gell_mann_basis(int d) {
    if (d < 2) {
        throw Error("bad_argument", "gell_mann_basis: d must be >= 2");
    }
    GeneratorBasis basis;
    basis.dim = d;
    basis.k_d = std::sqrt(2.0 * (d - 1) / d);
    basis.generators.reserve(static_cast<std::size_t>(d) * d - 1);

    const Complex i_unit(0.0, 1.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix t = Matrix::Zero(d, d);
            t(j, k) = 0.5;
            t(k, j) = 0.5;
            basis.generators.push_back(std::move(t));
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix t = Matrix::Zero(d, d);
            t(j, k) = -0.5 * i_unit;
            t(k, j) = 0.5 * i_unit;
            basis.generators.push_back(std::move(t));
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix t = Matrix::Zero(d, d);
        double scale = std::sqrt(1.0 / (2.0 * l * (l + 1)));
        for (int j = 0; j < l; ++j) t(j, j) = scale;
        t(l, l) = -scale * l;
        basis.generators.push_back(std::move(t));
    }
    return basis;
}

BlochVector bloch_vector(const DensityMatrix& rho, const GeneratorBasis& basis) {
    if (rho.dim() != basis.dim) {
        throw Error("dim_mismatch", "bloch_vector: state dim " + std::to_string(rho.dim()) +
                                        " vs basis dim " + std::to_string(basis.dim));
    }
    const int n_gen = static_cast<int>(basis.generators.size());
    BlochVector n;
    n.dim = basis.dim;
    n.components.resize(n_gen);
    for (int a = 0; a < n_gen; ++a) {
        n.components(a) = 2.0 / basis.k_d * trace_product(rho.matrix(), basis.generators[a]).real();
    }
    return n;
}

DensityMatrix state_from_bloch(const BlochVector& n, const GeneratorBasis& basis,
                               const Tolerances& tol) {
    if (n.dim != basis.dim ||
        n.components.size() != static_cast<Eigen::Index>(basis.generators.size())) {
        throw Error("dim_mismatch", "state_from_bloch: vector does not match basis");
    }
    const int d = basis.dim;
    Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
    for (std::size_t a = 0; a < basis.generators.size(); ++a) {
        m += basis.k_d * n.components(static_cast<Eigen::Index>(a)) * basis.generators[a];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < tol.psd_floor) {
        throw Error("not_positive",
                    "state_from_bloch: not positive semidefinite, eigenvalue " +
                        std::to_string(min_eig));
    }
    return DensityMatrix(std::move(m), tol);
}

AdjointMatrix adjoint_rep(const Matrix& u, const GeneratorBasis& basis, const Tolerances& tol) {
    if (u.rows() != basis.dim || u.cols() != basis.dim) {
        throw Error("dim_mismatch", "adjoint_rep: unitary does not match basis dim");
    }
    if (!is_unitary(u, tol.derived)) {
        throw Error("not_unitary", "adjoint_rep: input is not unitary within tolerance");
    }
    const int n_gen = static_cast<int>(basis.generators.size());
    AdjointMatrix ad;
    ad.dim = basis.dim;
    ad.matrix.resize(n_gen, n_gen);
    std::vector<Matrix> conjugated(static_cast<std::size_t>(n_gen));
    for (int a = 0; a < n_gen; ++a) {
        conjugated[static_cast<std::size_t>(a)] = u * basis.generators[static_cast<std::size_t>(a)] * u.adjoint();
    }
    for (int b = 0; b < n_gen; ++b) {
        for (int a = 0; a < n_gen; ++a) {
            // trace of a product of two Hermitian matrices; imaginary part is rounding
            ad.matrix(b, a) =
                2.0 * trace_product(basis.generators[static_cast<std::size_t>(b)],
                                    conjugated[static_cast<std::size_t>(a)])
                          .real();
        }
    }
    return ad;
}

BlochVector apply_adjoint(const AdjointMatrix& ad, const BlochVector& n) {
    if (ad.dim != n.dim || ad.matrix.cols() != n.components.size()) {
        throw Error("dim_mismatch", "apply_adjoint: dimension mismatch");
    }
    BlochVector out;
    out.dim = n.dim;
    out.components = ad.matrix * n.components;
    return out;
}

} // namespace fidelium
