#include "ancilla/engine.h"

#include <cmath>
#include <string>

#include "ancilla/errors.h"

namespace ancilla {

namespace {

constexpr double kZeroProbability = 1e-15;

bool is_diagonal(const Matrix& u) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            if (r != c && u(r, c) != Complex{}) {
                return false;
            }
        }
    }
    return true;
}

bool is_identity(const Matrix& u) {
    return is_diagonal(u) && (u.diagonal().array() == Complex{1.0, 0.0}).all();
}

// Visits every amplitude group of `wire`: the d indices base + j*stride.
template <typename Fn>
void for_each_group(const RegisterLayout& layout, std::size_t wire, Fn&& fn) {
    const std::uint64_t d = static_cast<std::uint64_t>(layout.dim(wire));
    const std::uint64_t stride = layout.stride(wire);
    const std::uint64_t block = d * stride;
    for (std::uint64_t outer = 0; outer < layout.size(); outer += block) {
        for (std::uint64_t inner = 0; inner < stride; ++inner) {
            fn(outer + inner);
        }
    }
}

void apply_group(std::span<Complex> amps, std::uint64_t base, std::uint64_t stride, const Matrix& u,
                 std::vector<Complex>& scratch) {
    const Eigen::Index d = u.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        scratch[j] = amps[base + j * stride];
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        Complex acc{};
        for (Eigen::Index j = 0; j < d; ++j) {
            acc += u(i, j) * scratch[j];
        }
        amps[base + i * stride] = acc;
    }
}

void apply_single(StateVector& state, std::size_t wire, const Matrix& u) {
    const RegisterLayout& layout = state.layout();
    std::span<Complex> amps = state.amplitudes();
    const std::uint64_t stride = layout.stride(wire);
    if (is_identity(u)) {
        return;
    }
    if (is_diagonal(u)) {
        const int d = layout.dim(wire);
        for_each_group(layout, wire, [&](std::uint64_t base) {
            for (int j = 1; j < d; ++j) {
                amps[base + j * stride] *= u(j, j);
            }
            amps[base] *= u(0, 0);
        });
        return;
    }
    std::vector<Complex> scratch(layout.dim(wire));
    for_each_group(layout, wire, [&](std::uint64_t base) { apply_group(amps, base, stride, u, scratch); });
}

void apply_controlled(StateVector& state, std::size_t control, std::size_t target,
                      const std::vector<Matrix>& blocks) {
    const RegisterLayout& layout = state.layout();
    std::span<Complex> amps = state.amplitudes();
    const std::uint64_t stride = layout.stride(target);
    std::vector<bool> skip(blocks.size());
    for (std::size_t m = 0; m < blocks.size(); ++m) {
        skip[m] = is_identity(blocks[m]);
    }
    std::vector<Complex> scratch(layout.dim(target));
    for_each_group(layout, target, [&](std::uint64_t base) {
        int m = layout.label_of(base, control);
        if (!skip[m]) {
            apply_group(amps, base, stride, blocks[m], scratch);
        }
    });
}

void apply_swap(StateVector& state, std::size_t a, std::size_t b) {
    const RegisterLayout& layout = state.layout();
    if (layout.dim(a) != layout.dim(b)) {
        throw PreconditionError("SWAP needs wires of equal dimension");
    }
    std::span<Complex> amps = state.amplitudes();
    const std::uint64_t sa = layout.stride(a);
    const std::uint64_t sb = layout.stride(b);
    for (std::uint64_t idx = 0; idx < layout.size(); ++idx) {
        std::uint64_t la = static_cast<std::uint64_t>(layout.label_of(idx, a));
        std::uint64_t lb = static_cast<std::uint64_t>(layout.label_of(idx, b));
        if (la < lb) {
            std::uint64_t partner = idx - la * sa - lb * sb + lb * sa + la * sb;
            std::swap(amps[idx], amps[partner]);
        }
    }
}

void check_wire(const RegisterLayout& layout, std::size_t w) {
    if (w >= layout.wire_count()) {
        throw PreconditionError("op references wire " + std::to_string(w) + " of a " +
                                std::to_string(layout.wire_count()) + "-wire register");
    }
}

std::vector<Matrix> controlled_blocks(const UnitarySpec& u, int d_control, int d_target, bool zero_controlled) {
    std::vector<Matrix> blocks;
    blocks.reserve(d_control);
    for (int m = 0; m < d_control; ++m) {
        if (zero_controlled) {
            blocks.push_back(m == 0 ? u.realize(d_target) : identity_matrix(d_target));
        } else {
            blocks.push_back(u.power_of(d_target, m));
        }
    }
    return blocks;
}

}  // namespace

StateVector::StateVector(RegisterLayout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.size()) {
        throw PreconditionError("amplitude count " + std::to_string(amps_.size()) +
                                " does not match layout size " + std::to_string(layout_.size()));
    }
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const Complex& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

StateVector init_register(const RegisterLayout& layout, std::span<const int> labels) {
    std::uint64_t index = layout.amp_index(labels);
    std::vector<Complex> amps(layout.size());
    amps[index] = 1.0;
    return StateVector(layout, std::move(amps));
}

StateVector product_state(const RegisterLayout& layout, std::span<const Vector> wire_states) {
    if (wire_states.size() != layout.wire_count()) {
        throw PreconditionError("need one state per wire");
    }
    for (std::size_t k = 0; k < wire_states.size(); ++k) {
        if (wire_states[k].size() != layout.dim(k)) {
            throw PreconditionError("wire state size mismatch on wire '" + layout.wire(k).name + "'");
        }
    }
    std::vector<Complex> amps(layout.size());
    for (std::uint64_t idx = 0; idx < layout.size(); ++idx) {
        Complex a{1.0, 0.0};
        for (std::size_t k = 0; k < wire_states.size(); ++k) {
            a *= wire_states[k](layout.label_of(idx, k));
        }
        amps[idx] = a;
    }
    StateVector s(layout, std::move(amps));
    double n = std::sqrt(s.norm_squared());
    if (n < 1e-12) {
        throw PreconditionError("product state has zero norm");
    }
    for (Complex& a : s.amplitudes()) {
        a /= n;
    }
    return s;
}

StateVector prepared_state(const Circuit& circuit) {
    std::vector<Vector> states;
    for (std::size_t k = 0; k < circuit.layout.wire_count(); ++k) {
        states.push_back(circuit.preparation(k).vector(circuit.layout.dim(k)));
    }
    return product_state(circuit.layout, states);
}

void apply_op(StateVector& state, const GateOp& op, const RecordTable& records) {
    const RegisterLayout& layout = state.layout();
    for (std::size_t w : op.wires()) {
        check_wire(layout, w);
    }
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ops::PauliX>) {
                apply_single(state, o.wire, pauli_matrix(PauliKind::x, layout.dim(o.wire), resolve(o.power, records)));
            } else if constexpr (std::is_same_v<T, ops::PauliZ>) {
                apply_single(state, o.wire, pauli_matrix(PauliKind::z, layout.dim(o.wire), resolve(o.power, records)));
            } else if constexpr (std::is_same_v<T, ops::Fourier>) {
                apply_single(state, o.wire, fourier_matrix(layout.dim(o.wire), o.inverse));
            } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                apply_single(state, o.wire, phase_matrix(layout.dim(o.wire), resolve(o.theta, records)));
            } else if constexpr (std::is_same_v<T, ops::LocalU>) {
                apply_single(state, o.wire, o.u.realize(layout.dim(o.wire)));
            } else if constexpr (std::is_same_v<T, ops::ControlledU>) {
                if (o.control == o.target) {
                    throw PreconditionError("controlled gate needs distinct wires");
                }
                apply_controlled(state, o.control, o.target,
                                 controlled_blocks(o.u, layout.dim(o.control), layout.dim(o.target),
                                                   o.zero_controlled));
            } else if constexpr (std::is_same_v<T, ops::Sum>) {
                if (o.control == o.target) {
                    throw PreconditionError("SUM needs distinct wires");
                }
                apply_controlled(state, o.control, o.target,
                                 controlled_blocks(UnitarySpec::pauli_x(1), layout.dim(o.control),
                                                   layout.dim(o.target), false));
            } else if constexpr (std::is_same_v<T, ops::Swap>) {
                if (o.a == o.b) {
                    throw PreconditionError("SWAP needs distinct wires");
                }
                apply_swap(state, o.a, o.b);
            } else {
                throw PreconditionError("apply_op cannot apply a measurement; use measure()");
            }
        },
        op.kind);
}

Matrix measurement_basis(Dimension d, bool theta_basis, double theta) {
    if (!theta_basis) {
        return identity_matrix(d);
    }
    return phase_matrix(d, -theta) * fourier_matrix(d);
}

std::vector<double> outcome_probabilities(const StateVector& state, std::size_t wire, const Matrix& basis) {
    const RegisterLayout& layout = state.layout();
    check_wire(layout, wire);
    const int d = layout.dim(wire);
    if (basis.rows() != d || basis.cols() != d) {
        throw PreconditionError("measurement basis does not match wire dimension");
    }
    std::span<const Complex> amps = state.amplitudes();
    const std::uint64_t stride = layout.stride(wire);
    std::vector<double> probs(d, 0.0);
    for_each_group(layout, wire, [&](std::uint64_t base) {
        for (int m = 0; m < d; ++m) {
            Complex c{};
            for (int j = 0; j < d; ++j) {
                c += std::conj(basis(j, m)) * amps[base + j * stride];
            }
            probs[m] += std::norm(c);
        }
    });
    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    if (total < 1e-24) {
        throw PreconditionError("cannot measure a state of zero norm");
    }
    for (double& p : probs) {
        p /= total;
        if (p < kZeroProbability) {
            p = 0.0;
        }
    }
    return probs;
}

void project(StateVector& state, std::size_t wire, const Matrix& basis, int outcome) {
    std::vector<double> probs = outcome_probabilities(state, wire, basis);
    if (outcome < 0 || outcome >= static_cast<int>(probs.size()) || probs[outcome] == 0.0) {
        throw PreconditionError("projection onto outcome " + std::to_string(outcome) + " has zero probability");
    }
    const RegisterLayout& layout = state.layout();
    std::span<Complex> amps = state.amplitudes();
    const int d = layout.dim(wire);
    const std::uint64_t stride = layout.stride(wire);
    double total = 0.0;
    for_each_group(layout, wire, [&](std::uint64_t base) {
        Complex c{};
        for (int j = 0; j < d; ++j) {
            c += std::conj(basis(j, outcome)) * amps[base + j * stride];
        }
        for (int j = 0; j < d; ++j) {
            amps[base + j * stride] = c * basis(j, outcome);
        }
        total += std::norm(c);
    });
    double scale = 1.0 / std::sqrt(total);
    for (Complex& a : amps) {
        a *= scale;
    }
}

MeasurementRecord measure(StateVector& state, const ops::Measure& m, const RecordTable& records, SplitMix64& rng) {
    check_wire(state.layout(), m.wire);
    double theta = m.basis.theta_basis ? resolve(m.basis.theta, records) : 0.0;
    Matrix basis = measurement_basis(state.layout().dim(m.wire), m.basis.theta_basis, theta);
    std::vector<double> probs = outcome_probabilities(state, m.wire, basis);
    double u = rng.uniform();
    int outcome = -1;
    double cumulative = 0.0;
    for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
        if (probs[k] == 0.0) {
            continue;
        }
        cumulative += probs[k];
        outcome = k;
        if (u < cumulative) {
            break;
        }
    }
    project(state, m.wire, basis, outcome);
    return {m.record, outcome};
}

RunResult run(const Circuit& circuit, StateVector initial, std::uint64_t seed) {
    if (!(circuit.layout == initial.layout())) {
        throw PreconditionError("initial state layout does not match the circuit");
    }
    circuit.validate();
    SplitMix64 rng(seed);
    RunResult result{std::move(initial), {}};
    for (const GateOp& op : circuit.ops) {
        if (const auto* m = std::get_if<ops::Measure>(&op.kind)) {
            MeasurementRecord rec = measure(result.final_state, *m, result.records, rng);
            result.records.set(rec.name, rec.outcome);
        } else {
            apply_op(result.final_state, op, result.records);
        }
    }
    return result;
}

double reduced_purity(const StateVector& state, std::size_t wire) {
    const RegisterLayout& layout = state.layout();
    check_wire(layout, wire);
    const int d = layout.dim(wire);
    const std::uint64_t stride = layout.stride(wire);
    std::span<const Complex> amps = state.amplitudes();
    Matrix rho = Matrix::Zero(d, d);
    for_each_group(layout, wire, [&](std::uint64_t base) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                rho(i, j) += amps[base + i * stride] * std::conj(amps[base + j * stride]);
            }
        }
    });
    double tr = rho.trace().real();
    if (tr <= 0.0) {
        throw PreconditionError("cannot compute purity of a zero state");
    }
    return rho.cwiseAbs2().sum() / (tr * tr);
}

}  // namespace ancilla
