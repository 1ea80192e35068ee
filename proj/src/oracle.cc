#include "ancilla/oracle.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/Sparse>

#include "ancilla/errors.h"

namespace ancilla {

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

void check_oracle_size(const RegisterLayout& layout) {
    if (layout.size() > kOracleAmplitudeCap) {
        throw SizeCapError("oracle is limited to " + std::to_string(kOracleAmplitudeCap) + " amplitudes, register has " +
                           std::to_string(layout.size()));
    }
}

SparseMatrix embed_sparse(const Matrix& u, std::span<const std::size_t> wires, const RegisterLayout& layout) {
    std::uint64_t sub = 1;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= layout.wire_count()) {
            throw PreconditionError("embed: wire out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[i] == wires[j]) {
                throw PreconditionError("embed: wires must be distinct");
            }
        }
        sub *= static_cast<std::uint64_t>(layout.dim(wires[i]));
    }
    if (u.rows() != static_cast<Eigen::Index>(sub) || u.cols() != static_cast<Eigen::Index>(sub)) {
        throw PreconditionError("embed: matrix is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                                " but the wires span " + std::to_string(sub));
    }
    // Local mixed-radix strides, first listed wire most significant.
    std::vector<std::uint64_t> local_stride(wires.size());
    std::uint64_t acc = 1;
    for (std::size_t i = wires.size(); i-- > 0;) {
        local_stride[i] = acc;
        acc *= static_cast<std::uint64_t>(layout.dim(wires[i]));
    }
    // Full-register offset contributed by each local row index.
    std::vector<std::uint64_t> offset(sub);
    for (std::uint64_t r = 0; r < sub; ++r) {
        std::uint64_t off = 0;
        for (std::size_t i = 0; i < wires.size(); ++i) {
            std::uint64_t label = (r / local_stride[i]) % static_cast<std::uint64_t>(layout.dim(wires[i]));
            off += label * layout.stride(wires[i]);
        }
        offset[r] = off;
    }
    const std::uint64_t n = layout.size();
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(n * std::min<std::uint64_t>(sub, 8));
    for (std::uint64_t col = 0; col < n; ++col) {
        std::uint64_t sub_col = 0;
        std::uint64_t base = col;
        for (std::size_t i = 0; i < wires.size(); ++i) {
            std::uint64_t label = static_cast<std::uint64_t>(layout.label_of(col, wires[i]));
            sub_col += label * local_stride[i];
            base -= label * layout.stride(wires[i]);
        }
        for (std::uint64_t r = 0; r < sub; ++r) {
            Complex v = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(sub_col));
            if (v != Complex{}) {
                triplets.emplace_back(static_cast<int>(base + offset[r]), static_cast<int>(col), v);
            }
        }
    }
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

SparseMatrix embedded_op(const GateOp& op, const RegisterLayout& layout, const RecordTable& records) {
    std::vector<std::size_t> ws = op.wires();
    return embed_sparse(op_matrix(op, layout, records), ws, layout);
}

Vector basis_vector(Dimension d, bool theta_basis, double theta, int m) {
    if (theta_basis) {
        return phase_matrix(d, -theta) * conjugate_state(d, m);
    }
    Vector v = Vector::Zero(d);
    v(m) = 1.0;
    return v;
}

void enumerate(const Circuit& circuit, std::size_t next_op, Vector state, double probability, RecordTable records,
               std::vector<Branch>& out) {
    const RegisterLayout& layout = circuit.layout;
    for (std::size_t i = next_op; i < circuit.ops.size(); ++i) {
        const GateOp& op = circuit.ops[i];
        const auto* m = std::get_if<ops::Measure>(&op.kind);
        if (m == nullptr) {
            state = embedded_op(op, layout, records) * state;
            continue;
        }
        const int d = layout.dim(m->wire);
        double theta = m->basis.theta_basis ? resolve(m->basis.theta, records) : 0.0;
        const std::size_t wire[] = {m->wire};
        for (int outcome = 0; outcome < d; ++outcome) {
            Vector v = basis_vector(d, m->basis.theta_basis, theta, outcome);
            Matrix projector = v * v.adjoint();
            Vector projected = embed_sparse(projector, wire, layout) * state;
            double p = projected.squaredNorm();
            if (p < 1e-15) {
                continue;
            }
            RecordTable next = records;
            next.set(m->record, outcome);
            enumerate(circuit, i + 1, projected / std::sqrt(p), probability * p, std::move(next), out);
        }
        return;
    }
    std::vector<Complex> amps(state.data(), state.data() + state.size());
    out.push_back(Branch{std::move(records), probability, StateVector(layout, std::move(amps))});
}

}  // namespace

Matrix embed_unitary(const Matrix& u, std::span<const std::size_t> wires, const RegisterLayout& layout) {
    check_oracle_size(layout);
    return Matrix(embed_sparse(u, wires, layout));
}

Matrix op_matrix(const GateOp& op, const RegisterLayout& layout, const RecordTable& records) {
    return std::visit(
        [&](const auto& o) -> Matrix {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ops::PauliX>) {
                return pauli_matrix(PauliKind::x, layout.dim(o.wire), resolve(o.power, records));
            } else if constexpr (std::is_same_v<T, ops::PauliZ>) {
                return pauli_matrix(PauliKind::z, layout.dim(o.wire), resolve(o.power, records));
            } else if constexpr (std::is_same_v<T, ops::Fourier>) {
                return fourier_matrix(layout.dim(o.wire), o.inverse);
            } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                return phase_matrix(layout.dim(o.wire), resolve(o.theta, records));
            } else if constexpr (std::is_same_v<T, ops::LocalU>) {
                return o.u.realize(layout.dim(o.wire));
            } else if constexpr (std::is_same_v<T, ops::ControlledU>) {
                Matrix u = o.u.realize(layout.dim(o.target));
                return o.zero_controlled ? zero_controlled_matrix(layout.dim(o.control), u)
                                         : controlled_matrix(layout.dim(o.control), u);
            } else if constexpr (std::is_same_v<T, ops::Sum>) {
                if (layout.dim(o.control) == layout.dim(o.target)) {
                    return sum_matrix(layout.dim(o.control));
                }
                return controlled_matrix(layout.dim(o.control), pauli_matrix(PauliKind::x, layout.dim(o.target), 1));
            } else if constexpr (std::is_same_v<T, ops::Swap>) {
                if (layout.dim(o.a) != layout.dim(o.b)) {
                    throw PreconditionError("SWAP needs wires of equal dimension");
                }
                return swap_matrix(layout.dim(o.a));
            } else {
                throw PreconditionError("a measurement has no unitary matrix");
            }
        },
        op.kind);
}

Matrix circuit_unitary(const Circuit& circuit) {
    check_oracle_size(circuit.layout);
    if (circuit.measurement_count() > 0) {
        throw PreconditionError("circuit_unitary: circuit contains measurements");
    }
    circuit.validate();
    const auto n = static_cast<Eigen::Index>(circuit.layout.size());
    Matrix acc = Matrix::Identity(n, n);
    RecordTable none;
    for (const GateOp& op : circuit.ops) {
        acc = embedded_op(op, circuit.layout, none) * acc;
    }
    return acc;
}

Vector oracle_apply(const Circuit& circuit, const Vector& initial) {
    check_oracle_size(circuit.layout);
    if (circuit.measurement_count() > 0) {
        throw PreconditionError("oracle_apply: circuit contains measurements");
    }
    if (initial.size() != static_cast<Eigen::Index>(circuit.layout.size())) {
        throw PreconditionError("oracle_apply: state size mismatch");
    }
    circuit.validate();
    Vector state = initial;
    RecordTable none;
    for (const GateOp& op : circuit.ops) {
        state = embedded_op(op, circuit.layout, none) * state;
    }
    return state;
}

std::vector<Branch> branch_enumerate(const Circuit& circuit, const StateVector& initial) {
    check_oracle_size(circuit.layout);
    if (!(circuit.layout == initial.layout())) {
        throw PreconditionError("branch_enumerate: initial state layout mismatch");
    }
    circuit.validate();
    std::span<const Complex> amps = initial.amplitudes();
    Vector state = Eigen::Map<const Vector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
    std::vector<Branch> out;
    enumerate(circuit, 0, state, 1.0, RecordTable{}, out);
    return out;
}

FidelityVerdict equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw PreconditionError("equal_up_to_global_phase: dimension mismatch");
    }
    FidelityVerdict v;
    v.tolerance = tol;
    v.fidelity = std::min(1.0, std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows()));
    v.pass = v.fidelity >= 1.0 - tol;
    return v;
}

double operator_fidelity(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw PreconditionError("operator_fidelity: dimension mismatch");
    }
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::min(1.0, std::abs((a.adjoint() * b).trace()) / (na * nb));
}

namespace {

struct Partition {
    std::uint64_t reg_size = 1;
    std::uint64_t anc_size = 1;
    // full_index[r * anc_size + k]
    std::vector<std::uint64_t> full_index;
};

std::uint64_t span_size(const RegisterLayout& layout, std::span<const std::size_t> wires) {
    std::uint64_t s = 1;
    for (std::size_t w : wires) {
        s *= static_cast<std::uint64_t>(layout.dim(w));
    }
    return s;
}

std::uint64_t offset_of(const RegisterLayout& layout, std::span<const std::size_t> wires, std::uint64_t local) {
    std::uint64_t off = 0;
    for (std::size_t i = wires.size(); i-- > 0;) {
        const auto d = static_cast<std::uint64_t>(layout.dim(wires[i]));
        off += (local % d) * layout.stride(wires[i]);
        local /= d;
    }
    return off;
}

Partition make_partition(const RegisterLayout& layout, std::span<const std::size_t> reg, std::span<const std::size_t> anc) {
    std::vector<int> seen(layout.wire_count(), 0);
    for (std::size_t w : reg) {
        if (w >= layout.wire_count()) throw PreconditionError("register wire out of range");
        ++seen[w];
    }
    for (std::size_t w : anc) {
        if (w >= layout.wire_count()) throw PreconditionError("ancilla wire out of range");
        ++seen[w];
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
        throw PreconditionError("register and ancilla wires must partition the layout");
    }
    Partition p;
    p.reg_size = span_size(layout, reg);
    p.anc_size = span_size(layout, anc);
    p.full_index.resize(p.reg_size * p.anc_size);
    for (std::uint64_t r = 0; r < p.reg_size; ++r) {
        std::uint64_t ro = offset_of(layout, reg, r);
        for (std::uint64_t k = 0; k < p.anc_size; ++k) {
            p.full_index[r * p.anc_size + k] = ro + offset_of(layout, anc, k);
        }
    }
    return p;
}

// columns: full-register outputs, one per register basis input.
BranchOperator extract(const Matrix& columns, const Partition& p) {
    const auto R = static_cast<Eigen::Index>(p.reg_size);
    const auto A = static_cast<Eigen::Index>(p.anc_size);
    auto at = [&](Eigen::Index r, Eigen::Index k, Eigen::Index i) {
        return columns(static_cast<Eigen::Index>(p.full_index[r * A + k]), i);
    };
    Eigen::Index best_r = 0, best_k = 0, best_i = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < R; ++i) {
        for (Eigen::Index r = 0; r < R; ++r) {
            for (Eigen::Index k = 0; k < A; ++k) {
                double v = std::abs(at(r, k, i));
                if (v > best) {
                    best = v;
                    best_r = r;
                    best_k = k;
                    best_i = i;
                }
            }
        }
    }
    (void)best_k;
    BranchOperator b;
    b.ancilla_state = Vector::Zero(A);
    for (Eigen::Index k = 0; k < A; ++k) {
        b.ancilla_state(k) = at(best_r, k, best_i);
    }
    double an = b.ancilla_state.norm();
    if (an > 0.0) {
        b.ancilla_state /= an;
    }
    b.op = Matrix::Zero(R, R);
    for (Eigen::Index i = 0; i < R; ++i) {
        for (Eigen::Index r = 0; r < R; ++r) {
            Complex c{};
            for (Eigen::Index k = 0; k < A; ++k) {
                c += std::conj(b.ancilla_state(k)) * at(r, k, i);
            }
            b.op(r, i) = c;
        }
    }
    double total = 0.0;
    double miss = 0.0;
    for (Eigen::Index i = 0; i < R; ++i) {
        Matrix rho = Matrix::Zero(A, A);
        for (Eigen::Index r = 0; r < R; ++r) {
            for (Eigen::Index k = 0; k < A; ++k) {
                Complex w = at(r, k, i);
                total += std::norm(w);
                miss += std::norm(w - b.op(r, i) * b.ancilla_state(k));
                for (Eigen::Index k2 = 0; k2 < A; ++k2) {
                    rho(k, k2) += w * std::conj(at(r, k2, i));
                }
            }
        }
        double tr = rho.trace().real();
        if (tr > 1e-24) {
            b.min_purity = std::min(b.min_purity, rho.cwiseAbs2().sum() / (tr * tr));
        }
    }
    b.residual = total > 0.0 ? miss / total : 0.0;
    return b;
}

Vector register_input(const RegisterLayout& layout, const Circuit& circuit, std::span<const std::size_t> reg,
                      std::uint64_t r) {
    // Product of |r> on the register wires and each ancilla's preparation.
    std::vector<Vector> per_wire(layout.wire_count());
    for (std::size_t k = 0; k < layout.wire_count(); ++k) {
        per_wire[k] = circuit.preparation(k).vector(layout.dim(k));
    }
    for (std::size_t i = reg.size(); i-- > 0;) {
        const int d = layout.dim(reg[i]);
        per_wire[reg[i]] = Vector::Zero(d);
        per_wire[reg[i]](static_cast<Eigen::Index>(r % d)) = 1.0;
        r /= d;
    }
    Vector full = per_wire[0];
    for (std::size_t k = 1; k < per_wire.size(); ++k) {
        full = kron(full, per_wire[k]);
    }
    return full;
}

}  // namespace

std::vector<BranchOperator> branch_register_operators(const Circuit& circuit,
                                                      std::span<const std::size_t> register_wires,
                                                      std::span<const std::size_t> ancilla_wires) {
    const RegisterLayout& layout = circuit.layout;
    check_oracle_size(layout);
    Partition p = make_partition(layout, register_wires, ancilla_wires);
    const auto S = static_cast<Eigen::Index>(layout.size());
    const auto R = static_cast<Eigen::Index>(p.reg_size);

    std::vector<BranchOperator> out;
    if (circuit.measurement_count() == 0) {
        Matrix u = circuit_unitary(circuit);
        Matrix columns(S, R);
        for (Eigen::Index r = 0; r < R; ++r) {
            columns.col(r) = u * register_input(layout, circuit, register_wires, static_cast<std::uint64_t>(r));
        }
        out.push_back(extract(columns, p));
        return out;
    }

    std::map<std::vector<int>, Matrix> grouped;
    for (Eigen::Index r = 0; r < R; ++r) {
        Vector in = register_input(layout, circuit, register_wires, static_cast<std::uint64_t>(r));
        StateVector initial(layout, std::vector<Complex>(in.data(), in.data() + in.size()));
        for (const Branch& b : branch_enumerate(circuit, initial)) {
            std::vector<int> key;
            for (const MeasurementRecord& rec : b.outcomes.entries()) {
                key.push_back(rec.outcome);
            }
            auto [it, inserted] = grouped.try_emplace(key, Matrix::Zero(S, R));
            std::span<const Complex> amps = b.state.amplitudes();
            double scale = std::sqrt(b.probability);
            for (Eigen::Index i = 0; i < S; ++i) {
                it->second(i, r) = amps[static_cast<std::size_t>(i)] * scale;
            }
        }
    }
    for (auto& [key, columns] : grouped) {
        BranchOperator b = extract(columns, p);
        b.outcomes = key;
        out.push_back(std::move(b));
    }
    return out;
}

FidelityVerdict verify_construction(const ConstructionReport& report, double tol) {
    const Circuit& circuit = report.circuit;
    auto reg_size = static_cast<Eigen::Index>(span_size(circuit.layout, report.register_wires));
    if (report.target.rows() != reg_size || report.target.cols() != reg_size) {
        throw PreconditionError("target size does not match the register wires");
    }
    std::vector<BranchOperator> branches =
        branch_register_operators(circuit, report.register_wires, report.ancilla_wires);
    FidelityVerdict v;
    v.tolerance = tol;
    v.fidelity = 1.0;
    v.branch_count = branches.size();
    double worst_residual = 0.0;
    for (const BranchOperator& b : branches) {
        v.fidelity = std::min(v.fidelity, operator_fidelity(b.op, report.target));
        v.min_ancilla_purity = std::min(v.min_ancilla_purity, b.min_purity);
        worst_residual = std::max(worst_residual, b.residual);
    }
    if (branches.empty()) {
        v.fidelity = 0.0;
    }
    v.ancilla_disentangled = v.min_ancilla_purity >= 1.0 - kPurityTolerance && worst_residual <= kPurityTolerance;
    v.pass = v.ancilla_disentangled && v.fidelity >= 1.0 - tol;
    return v;
}

}  // namespace ancilla
