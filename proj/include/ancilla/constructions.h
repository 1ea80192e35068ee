#pragma once

#include <span>
#include <variant>
#include <vector>

#include "ancilla/circuit.h"
#include "ancilla/report.h"

namespace ancilla {

/// Register-controlled Paulis steering the ancilla around a closed loop:
/// C Z(p1) from r1, C X(-p2) from r2, C Z(-p1) from r1, C X(p2) from r2.
/// Register action CR(2 pi p1 p2 / d_a); the ancilla operator is a scalar.
ConstructionReport geometric_phase_circuit(Dimension d1, Dimension d2, Dimension d_ancilla, int p1, int p2);

/// First half of the loop on an ancilla prepared in |+_0>, then a
/// computational measurement (record "m") and the phase correction
/// R(-2 pi p1 m / d_a) on r1 (Z(-p1 m) when d1 == d_a).
ConstructionReport measured_phase_circuit(Dimension d1, Dimension d2, Dimension d_ancilla, int p1, int p2);

/// N control wires and M target wires share one ancilla; realizes
/// CR(2 pi p_j p'_k / d_a) between every control j and target k using
/// 2(N+M) interactions.
ConstructionReport batch_rotation_circuit(std::span<const int> control_powers, std::span<const int> target_powers,
                                          Dimension d_ancilla, std::span<const int> control_dims,
                                          std::span<const int> target_dims);

/// Generalized Toffoli on N control qubits and one target qubit via a
/// counting ancilla of dimension d_a > N initialized to |-N mod d_a>.
ConstructionReport toffoli_circuit(int n_controls, Dimension d_ancilla, const UnitarySpec& u);

/// Controlled-u on a target of dimension 2 from N qubit controls, the dense
/// reference used as the Toffoli target.
Matrix multi_controlled_matrix(int n_controls, const Matrix& u);

enum class AdqcVariant {
    /// (F on register) (x) (F^dag on ancilla), after CZ.
    inverse_fourier_ancilla,
    /// (F (x) F) after CZ.
    fourier_both,
};

/// The fixed register-ancilla interaction over (register, ancilla).
Matrix adqc_interaction(Dimension d, AdqcVariant variant = AdqcVariant::inverse_fourier_ancilla);

/// Two interactions E(r1,a), E(r2,a), computational measurement of the
/// ancilla, then Pauli corrections derived from the branch oracle.
ConstructionReport adqc_entangle_circuit(Dimension d, AdqcVariant variant = AdqcVariant::inverse_fourier_ancilla);

/// Qubit local gate v(theta) = H R(theta) from one interaction and a
/// measurement projecting the ancilla onto R(-theta)|+_m>.
ConstructionReport adqc_local_circuit(double theta);

struct AdqcLocalGate {
    std::size_t wire;
    double theta;
};
struct AdqcEntangleGate {
    std::size_t first;
    std::size_t second;
};
using AdqcGate = std::variant<AdqcLocalGate, AdqcEntangleGate>;

/// Direct qubit circuit of v(theta) and U_ent = (F (x) F) CZ gates.
Circuit adqc_direct_circuit(int register_qubits, std::span<const AdqcGate> gates);

/// Compiles the gate list onto one reused ancilla qubit. The target is the
/// direct circuit's unitary.
ConstructionReport adqc_compile(int register_qubits, std::span<const AdqcGate> gates);

/// Three SWAP.CR(theta) interactions (a,r1), (a,r2), (a,r1) with the ancilla
/// in |0>; register action SWAP.CR(theta).
ConstructionReport swapcz_entangle_circuit(Dimension d, double theta);

/// Swap in, apply u on the ancilla, swap out.
ConstructionReport swapcz_local_circuit(Dimension d, const UnitarySpec& u, double theta);

/// Qubit scheme with the fixed interaction (I (x) u) SWAP CR(theta) and the
/// ancilla prepared in |prep>: two interactions give u (prep 0) or
/// R(theta) u R(theta) (prep 1).
ConstructionReport minimal_control_circuit(int prep, const UnitarySpec& u, double theta);

/// Runs the oracle and stores the verdict in the report.
ConstructionReport& attach_verdict(ConstructionReport& report, double tol = 1e-10);

}  // namespace ancilla
