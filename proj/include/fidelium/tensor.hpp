#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "fidelium/config.hpp"

namespace fidelium {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Domain error carrying a stable machine-readable code ("dim_mismatch",
/// "not_unitary", ...) and optional key/value context for reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message,
          std::map<std::string, std::string> context = {})
        : std::runtime_error(message),
          code_(std::move(code)),
          context_(std::move(context)) {}

    const std::string& code() const noexcept { return code_; }
    const std::map<std::string, std::string>& context() const noexcept { return context_; }

private:
    std::string code_;
    std::map<std::string, std::string> context_;
};

bool all_finite(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol);
bool is_unitary(const Matrix& u, double tol);

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Checked wrappers around the corresponding Eigen expressions. Internal code
// uses Eigen operators directly; these are the validated public surface.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix dagger(const Matrix& a);
Complex trace(const Matrix& a);

/// tr(a b) in O(n^2) without forming the product.
template <typename DerivedA, typename DerivedB>
Complex trace_product(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw Error("dim_mismatch", "trace_product: shapes do not contract");
    }
    return a.cwiseProduct(b.transpose()).sum();
}

Matrix kron(const Matrix& a, const Matrix& b);

// Weyl-Heisenberg pair on C^d: shift X|j> = |j+1 mod d>, clock Z|j> = w^j|j>
// with w = exp(2*pi*i/d), and the displacement X^p Z^q.
Matrix shift_matrix(int d);
Matrix clock_matrix(int d);
Matrix displacement(int d, int p, int q);

/// Gram-Schmidt orthonormalization of the columns of a (full column rank)
/// matrix. The implied triangular factor has a positive diagonal, so applying
/// this to an iid complex Gaussian matrix yields Haar-distributed frames.
Matrix orthonormalize_columns(const Matrix& a);

/// Normalized state vector on C^d. Construction rejects vectors whose norm
/// deviates from 1 beyond tol.validity; it never renormalizes silently.
class PureState {
public:
    explicit PureState(Vector amplitudes,
                       const Tolerances& tol = default_tolerances());

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

private:
    Vector amplitudes_;
};

/// d x d density matrix. Construction validates Hermiticity and unit trace at
/// tol.validity and eigenvalues >= tol.psd_floor; values are immutable after.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, const Tolerances& tol = default_tolerances());

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }

private:
    Matrix matrix_;
};

/// Rank-1 projector |psi><psi|.
DensityMatrix outer(const PureState& psi);

DensityMatrix maximally_mixed(int d);

/// |Phi> = (1/sqrt(d)) sum_j |jj> on C^(d^2).
PureState maximally_entangled(int d);

} // namespace fidelium
