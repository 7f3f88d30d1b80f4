#pragma once

#include <vector>

#include "fidelium/tensor.hpp"

namespace fidelium {

/// Generalized Gell-Mann generators T_a of SU(d), normalized so that
/// tr(T_a T_b) = delta_ab / 2, together with k_d = sqrt(2(d-1)/d) relating
/// them to density matrices via rho = 1/d + k_d n.T.
///
/// Canonical ordering (fixed convention for every Bloch component index in
/// this library): all symmetric pair generators (E_jk + E_kj)/2 for j < k in
/// lexicographic order, then all antisymmetric pair generators
/// (-i E_jk + i E_kj)/2, then the d-1 diagonal generators
/// sqrt(1/(2l(l+1))) (E_00 + ... + E_(l-1)(l-1) - l E_ll) for l = 1..d-1.
/// For d = 2 this is {sigma_x/2, sigma_y/2, sigma_z/2}.
struct GeneratorBasis {
    int dim = 0;
    std::vector<Matrix> generators; // d^2 - 1 matrices, each d x d
    double k_d = 0.0;
};

/// Real coordinate vector of a density matrix in the generator basis,
/// components n_a = (2/k_d) tr(rho T_a). Unit norm for pure states.
struct BlochVector {
    int dim = 0;
    RealVector components; // length d^2 - 1
};

/// Image of conjugation by a unitary on the generator basis, stored so that
/// matrix(b, a) = 2 tr(T_b U T_a U+). It acts on Bloch column vectors as
/// n -> matrix * n and composes as adjoint_rep(U V) = adjoint_rep(U) *
/// adjoint_rep(V). Orthogonal with determinant +1.
struct AdjointMatrix {
    int dim = 0;
    RealMatrix matrix; // (d^2 - 1) x (d^2 - 1)
};

GeneratorBasis gell_mann_basis(int d);

BlochVector bloch_vector(const DensityMatrix& rho, const GeneratorBasis& basis);

/// Inverse of bloch_vector on its image: 1/d + k_d n.T. Not every unit vector
/// maps to a state for d > 2; positivity is checked and violations throw.
DensityMatrix state_from_bloch(const BlochVector& n, const GeneratorBasis& basis,
                               const Tolerances& tol = default_tolerances());

AdjointMatrix adjoint_rep(const Matrix& u, const GeneratorBasis& basis,
                          const Tolerances& tol = default_tolerances());

BlochVector apply_adjoint(const AdjointMatrix& ad, const BlochVector& n);

} // namespace fidelium
