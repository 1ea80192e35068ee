#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ancilla/circuit.h"
#include "ancilla/engine.h"
#include "ancilla/report.h"

namespace ancilla {

/// Dense-matrix ground truth. None of this goes through the strided engine
/// kernels; every op becomes an explicit full-register matrix.
inline constexpr std::uint64_t kOracleAmplitudeCap = std::uint64_t{1} << 12;
inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kPurityTolerance = 1e-8;

/// u acting on `wires` (in listed order), identity elsewhere.
Matrix embed_unitary(const Matrix& u, std::span<const std::size_t> wires, const RegisterLayout& layout);

/// Matrix of a non-measurement op over its own wires (GateOp::wires order).
Matrix op_matrix(const GateOp& op, const RegisterLayout& layout, const RecordTable& records);

/// Ordered product of embedded op matrices, later ops on the left.
Matrix circuit_unitary(const Circuit& circuit);

/// Applies a measurement-free circuit to a state by embedded matrix-vector
/// products.
Vector oracle_apply(const Circuit& circuit, const Vector& initial);

struct Branch {
    RecordTable outcomes;
    double probability = 0.0;
    StateVector state;
};

/// Every measurement history with nonzero probability (threshold 1e-15),
/// depth first with outcomes ascending.
std::vector<Branch> branch_enumerate(const Circuit& circuit, const StateVector& initial);

/// |tr(A^dag B)| / dim.
FidelityVerdict equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol);

/// |tr(A^dag B)| / (||A||_F ||B||_F); 0 if either is zero.
double operator_fidelity(const Matrix& a, const Matrix& b);

/// Register operator realized on one measurement branch.
struct BranchOperator {
    std::vector<int> outcomes;
    /// Scaled by sqrt(branch probability).
    Matrix op;
    Vector ancilla_state;
    double residual = 0.0;
    double min_purity = 1.0;
};

/// For every register basis input, runs the circuit from that input with the
/// ancillas in their prepared states, and groups the resulting columns by
/// outcome history. `register_wires` and `ancilla_wires` must partition the
/// layout.
std::vector<BranchOperator> branch_register_operators(const Circuit& circuit,
                                                      std::span<const std::size_t> register_wires,
                                                      std::span<const std::size_t> ancilla_wires);

/// Minimum fidelity over branches of the realized register action against
/// report.target, plus the ancilla disentanglement check.
FidelityVerdict verify_construction(const ConstructionReport& report, double tol = kDefaultTolerance);

}  // namespace ancilla
