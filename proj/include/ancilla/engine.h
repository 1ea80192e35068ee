#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ancilla/circuit.h"
#include "ancilla/prng.h"

namespace ancilla {

/// Dense amplitudes over a RegisterLayout.
class StateVector {
  public:
    StateVector(RegisterLayout layout, std::vector<Complex> amplitudes);

    const RegisterLayout& layout() const { return layout_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }
    Complex amplitude(std::uint64_t index) const { return amps_.at(index); }
    double norm_squared() const;

    bool operator==(const StateVector& other) const {
        return layout_ == other.layout_ && amps_ == other.amps_;
    }

  private:
    RegisterLayout layout_;
    std::vector<Complex> amps_;
};

/// Product computational basis state.
StateVector init_register(const RegisterLayout& layout, std::span<const int> labels);

/// Product of one normalized vector per wire.
StateVector product_state(const RegisterLayout& layout, std::span<const Vector> wire_states);

/// The product state named by the circuit's per-wire preparations.
StateVector prepared_state(const Circuit& circuit);

/// Applies a non-measurement op in place. Unresolved records and wire
/// mismatches throw PreconditionError.
void apply_op(StateVector& state, const GateOp& op, const RecordTable& records);

/// Basis vectors of a measurement basis on a wire of dimension d, as columns:
/// computational columns are |m>, theta columns are R(-theta)|+_m>.
Matrix measurement_basis(Dimension d, bool theta_basis, double theta);

/// Outcome probabilities; entries below 1e-15 are reported as exactly 0.
std::vector<double> outcome_probabilities(const StateVector& state, std::size_t wire,
                                          const Matrix& basis);

/// Collapses onto basis vector `outcome` and renormalizes. Throws
/// PreconditionError if that outcome has zero probability.
void project(StateVector& state, std::size_t wire, const Matrix& basis, int outcome);

/// Samples one outcome (consuming exactly one draw from `rng`), collapses.
MeasurementRecord measure(StateVector& state, const ops::Measure& m, const RecordTable& records,
                          SplitMix64& rng);

struct RunResult {
    StateVector final_state;
    RecordTable records;
};

/// Executes the ops in order. Deterministic in (circuit, initial, seed).
RunResult run(const Circuit& circuit, StateVector initial, std::uint64_t seed);

/// tr(rho^2) of the wire's reduced density matrix.
double reduced_purity(const StateVector& state, std::size_t wire);

}  // namespace ancilla
