#pragma once

#include <cmath>

#include "fidelium/tensor.hpp"

namespace fidelium::testing {

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// Analytic oracle for the depolarizing channel: the map is
// rho -> (1-p) rho + p/d, so tr[rho E(rho)] = (1-p) + p/d for every pure rho
// and the Haar average is 1 - p(d-1)/d.
inline double depolarizing_avg_fidelity(int d, double p) {
    return 1.0 - p * (d - 1) / d;
}

// Entanglement fidelity of the depolarizing channel: (E x id) leaves the
// maximally entangled state with weight 1-p and replaces it with the
// maximally mixed state (overlap 1/d^2) with weight p.
inline double depolarizing_entanglement_fidelity(int d, double p) {
    return 1.0 - p * (d * d - 1.0) / (d * d);
}

} // namespace fidelium::testing
