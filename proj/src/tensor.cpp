#include "fidelium/tensor.hpp"

#include <cmath>
#include <numbers>

namespace fidelium {

bool all_finite(const Matrix& a) {
    return a.allFinite();
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs_diff(a, a.adjoint()) <= tol;
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    Matrix gram = u.adjoint() * u;
    return max_abs_diff(gram, Matrix::Identity(u.rows(), u.cols())) <= tol;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error("dim_mismatch",
                    "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    return a * b;
}

Matrix dagger(const Matrix& a) {
    return a.adjoint();
}

Complex trace(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw Error("dim_mismatch", "trace: matrix is not square");
    }
    return a.trace();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix shift_matrix(int d) {
    if (d < 1) throw Error("bad_argument", "shift_matrix: d must be positive");
    Matrix x = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
    return x;
}

Matrix clock_matrix(int d) {
    if (d < 1) throw Error("bad_argument", "clock_matrix: d must be positive");
    Matrix z = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        double phase = 2.0 * std::numbers::pi * j / d;
        z(j, j) = Complex(std::cos(phase), std::sin(phase));
    }
    return z;
}

Matrix displacement(int d, int p, int q) {
    if (d < 1) throw Error("bad_argument", "displacement: d must be positive");
    p = ((p % d) + d) % d;
    q = ((q % d) + d) % d;
    // (X^p Z^q)|j> = w^(q j) |j+p mod d>
    Matrix m = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        double phase = 2.0 * std::numbers::pi * q * j / d;
        m((j + p) % d, j) = Complex(std::cos(phase), std::sin(phase));
    }
    return m;
}

Matrix orthonormalize_columns(const Matrix& a) {
    // Modified Gram-Schmidt, two orthogonalization sweeps per column.
    Matrix q = a;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (Eigen::Index i = 0; i < j; ++i) {
                Complex proj = q.col(i).dot(q.col(j));
                q.col(j) -= proj * q.col(i);
            }
        }
        double norm = q.col(j).norm();
        if (norm < 1e-14) {
            throw Error("rank_deficient", "orthonormalize_columns: column norm collapsed");
        }
        q.col(j) /= norm;
    }
    return q;
}

PureState::PureState(Vector amplitudes, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw Error("bad_argument", "PureState: empty amplitude vector");
    }
    if (!amplitudes_.allFinite()) {
        throw Error("not_finite", "PureState: non-finite amplitude");
    }
    double norm_sq = amplitudes_.squaredNorm();
    if (std::abs(norm_sq - 1.0) > tol.validity) {
        throw Error("not_normalized",
                    "PureState: |amplitudes|^2 = " + std::to_string(norm_sq));
    }
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw Error("dim_mismatch", "DensityMatrix: matrix must be square and nonempty");
    }
    if (!matrix_.allFinite()) {
        throw Error("not_finite", "DensityMatrix: non-finite entry");
    }
    if (!is_hermitian(matrix_, tol.validity)) {
        throw Error("not_density", "DensityMatrix: not Hermitian within tolerance");
    }
    double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol.validity) {
        throw Error("not_density", "DensityMatrix: trace = " + std::to_string(tr));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < tol.psd_floor) {
        throw Error("not_positive",
                    "DensityMatrix: eigenvalue " + std::to_string(solver.eigenvalues().minCoeff()));
    }
}

DensityMatrix outer(const PureState& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(std::move(m));
}

DensityMatrix maximally_mixed(int d) {
    if (d < 1) throw Error("bad_argument", "maximally_mixed: d must be positive");
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

PureState maximally_entangled(int d) {
    if (d < 1) throw Error("bad_argument", "maximally_entangled: d must be positive");
    Vector phi = Vector::Zero(d * d);
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) phi(j * d + j) = amp;
    return PureState(std::move(phi));
}

} // namespace fidelium
