#include "ancilla/constructions.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ancilla/errors.h"
#include "ancilla/oracle.h"

namespace ancilla {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GateOp local_op(std::size_t wire, const UnitarySpec& u, std::optional<int> interaction = std::nullopt) {
    switch (u.kind) {
        case UnitarySpec::Kind::x:
            return {ops::PauliX{wire, PowerExpr::constant(u.power)}, interaction};
        case UnitarySpec::Kind::z:
            return {ops::PauliZ{wire, PowerExpr::constant(u.power)}, interaction};
        case UnitarySpec::Kind::fourier:
            return {ops::Fourier{wire, false}, interaction};
        case UnitarySpec::Kind::fourier_inverse:
            return {ops::Fourier{wire, true}, interaction};
        case UnitarySpec::Kind::phase:
            return {ops::PhaseR{wire, ThetaExpr::constant(u.theta)}, interaction};
        default:
            return {ops::LocalU{wire, u}, interaction};
    }
}

void require_fits(const UnitarySpec& u, int d, const char* what) {
    if (!u.fits(d)) {
        throw PreconditionError(std::string(what) + ": unitary does not act on dimension " + std::to_string(d));
    }
}

std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
    std::vector<std::size_t> out;
    for (std::size_t k = from; k < to; ++k) {
        out.push_back(k);
    }
    return out;
}

// Appends the op (with its record reference) to both the circuit and the
// correction list.
void add_correction(ConstructionReport& report, GateOp op, const std::string& record) {
    report.circuit.ops.push_back(op);
    report.corrections.push_back({record, std::move(op)});
}

int signed_mod(std::int64_t v, int d) {
    int r = mod_label(v, d);
    return (r > d / 2) ? r - d : r;
}

void emit_adqc_interaction(Circuit& c, std::size_t reg, std::size_t anc, AdqcVariant variant, int id) {
    c.add(ops::ControlledU{reg, anc, UnitarySpec::pauli_z(1), false}, id);
    c.add(ops::Fourier{reg, false}, id);
    c.add(ops::Fourier{anc, variant == AdqcVariant::inverse_fourier_ancilla}, id);
}

void emit_swap_cr(Circuit& c, std::size_t x, std::size_t y, double theta, int id) {
    c.add(ops::ControlledU{x, y, UnitarySpec::phase(theta), false}, id);
    c.add(ops::Swap{x, y}, id);
}

struct DerivedCorrections {
    std::vector<GateOp> ops;
    Matrix reference;
};

// Finds, for every outcome m of the single measurement in `prefix`, Pauli
// corrections X(x_w) Z(z_w) on each register wire mapping the branch-m
// register operator onto the branch-0 operator, then fits each exponent as
// an affine function of m.
DerivedCorrections derive_pauli_corrections(const Circuit& prefix, std::span<const std::size_t> reg,
                                            std::span<const std::size_t> anc, const std::string& record) {
    std::vector<BranchOperator> branches = branch_register_operators(prefix, reg, anc);
    if (branches.empty() || branches.front().outcomes != std::vector<int>{0}) {
        throw std::logic_error("correction derivation: outcome 0 branch missing");
    }
    const Matrix& base = branches.front().op;
    DerivedCorrections out;
    out.reference = base * (std::sqrt(static_cast<double>(base.rows())) / base.norm());

    std::vector<int> dims;
    std::size_t candidates = 1;
    for (std::size_t w : reg) {
        dims.push_back(prefix.layout.dim(w));
        candidates *= static_cast<std::size_t>(dims.back() * dims.back());
    }
    // exponents[m][2*i] = x power on reg[i], exponents[m][2*i+1] = z power.
    std::vector<std::vector<int>> exponents;
    for (const BranchOperator& b : branches) {
        if (b.outcomes.size() != 1 || b.outcomes[0] != static_cast<int>(exponents.size())) {
            throw std::logic_error("correction derivation expects every outcome of one measurement");
        }
        bool found = false;
        for (std::size_t c = 0; c < candidates && !found; ++c) {
            std::size_t rest = c;
            std::vector<int> e(2 * reg.size());
            Matrix correction = Matrix::Identity(1, 1);
            for (std::size_t i = 0; i < reg.size(); ++i) {
                const int d = dims[i];
                e[2 * i + 1] = static_cast<int>(rest % d);
                rest /= d;
                e[2 * i] = static_cast<int>(rest % d);
                rest /= d;
                correction = kron(correction, pauli_matrix(PauliKind::x, d, e[2 * i]) *
                                                  pauli_matrix(PauliKind::z, d, e[2 * i + 1]));
            }
            if (operator_fidelity(correction * b.op, base) >= 1.0 - 1e-10) {
                exponents.push_back(std::move(e));
                found = true;
            }
        }
        if (!found) {
            throw std::logic_error("no Pauli correction maps branch " + std::to_string(b.outcomes[0]) +
                                   " onto branch 0");
        }
    }
    for (std::size_t i = 0; i < reg.size(); ++i) {
        const int d = dims[i];
        for (int which : {1, 0}) {  // Z first in time, then X
            std::int64_t b0 = exponents[0][2 * i + which];
            std::int64_t slope = exponents.size() > 1 ? exponents[1][2 * i + which] - b0 : 0;
            for (std::size_t m = 0; m < exponents.size(); ++m) {
                if (mod_label(slope * static_cast<std::int64_t>(m) + b0 - exponents[m][2 * i + which], d) != 0) {
                    throw std::logic_error("Pauli correction exponent is not affine in the outcome");
                }
            }
            PowerExpr power = PowerExpr::of(signed_mod(slope, d), record, signed_mod(b0, d));
            if (power.a == 0 && power.b == 0) {
                continue;
            }
            if (which == 1) {
                out.ops.push_back(GateOp{ops::PauliZ{reg[i], power}, std::nullopt});
            } else {
                out.ops.push_back(GateOp{ops::PauliX{reg[i], power}, std::nullopt});
            }
        }
    }
    return out;
}

std::string rename_record(const std::string& name, const std::string& suffix) {
    return name.empty() ? name : name + suffix;
}

template <typename Expr>
Expr renamed(Expr e, const std::string& suffix) {
    e.record = rename_record(e.record, suffix);
    return e;
}

// Copies src's ops into dst with wires remapped, records suffixed and
// interaction ids shifted.
void splice(Circuit& dst, const Circuit& src, std::span<const std::size_t> wire_map, const std::string& suffix,
            int id_offset) {
    for (const GateOp& op : src.ops) {
        GateOp copy = op;
        if (copy.interaction) {
            *copy.interaction += id_offset;
        }
        std::visit(
            [&](auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, ops::ControlledU> || std::is_same_v<T, ops::Sum>) {
                    o.control = wire_map[o.control];
                    o.target = wire_map[o.target];
                } else if constexpr (std::is_same_v<T, ops::Swap>) {
                    o.a = wire_map[o.a];
                    o.b = wire_map[o.b];
                } else {
                    o.wire = wire_map[o.wire];
                }
                if constexpr (std::is_same_v<T, ops::PauliX> || std::is_same_v<T, ops::PauliZ>) {
                    o.power = renamed(o.power, suffix);
                } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                    o.theta = renamed(o.theta, suffix);
                } else if constexpr (std::is_same_v<T, ops::Measure>) {
                    o.basis.theta = renamed(o.basis.theta, suffix);
                    o.record = rename_record(o.record, suffix);
                }
            },
            copy.kind);
        dst.ops.push_back(std::move(copy));
    }
}

int max_interaction_id(const Circuit& c) {
    int best = -1;
    for (const GateOp& op : c.ops) {
        if (op.interaction) {
            best = std::max(best, *op.interaction);
        }
    }
    return best;
}

void finish(ConstructionReport& report) {
    report.interaction_count = count_interactions(report.circuit, report.ancilla_wires);
    report.circuit.records.clear();
    for (const GateOp& op : report.circuit.ops) {
        if (const auto* m = std::get_if<ops::Measure>(&op.kind)) {
            report.circuit.records.push_back(m->record);
        }
    }
    report.circuit.validate();
}

}  // namespace

ConstructionReport geometric_phase_circuit(Dimension d1, Dimension d2, Dimension d_ancilla, int p1, int p2) {
    ConstructionReport r;
    r.scheme = "geometric";
    std::ostringstream params;
    params << "d1=" << d1.value() << " d2=" << d2.value() << " da=" << d_ancilla.value() << " p1=" << p1
           << " p2=" << p2;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r1", d1}, {"r2", d2}, {"a", d_ancilla}}));
    const std::size_t r1 = 0, r2 = 1, a = 2;
    r.circuit.add(ops::ControlledU{r1, a, UnitarySpec::pauli_z(p1), false});
    r.circuit.add(ops::ControlledU{r2, a, UnitarySpec::pauli_x(-p2), false});
    r.circuit.add(ops::ControlledU{r1, a, UnitarySpec::pauli_z(-p1), false});
    r.circuit.add(ops::ControlledU{r2, a, UnitarySpec::pauli_x(p2), false});
    r.register_wires = {r1, r2};
    r.ancilla_wires = {a};
    r.target = controlled_phase_matrix(d1, d2, kTwoPi * p1 * p2 / d_ancilla.value());
    finish(r);
    return r;
}

ConstructionReport measured_phase_circuit(Dimension d1, Dimension d2, Dimension d_ancilla, int p1, int p2) {
    ConstructionReport r;
    r.scheme = "measured";
    std::ostringstream params;
    params << "d1=" << d1.value() << " d2=" << d2.value() << " da=" << d_ancilla.value() << " p1=" << p1
           << " p2=" << p2;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r1", d1}, {"r2", d2}, {"a", d_ancilla}}));
    const std::size_t r1 = 0, r2 = 1, a = 2;
    r.circuit.set_preparation(a, Preparation::plus(0));
    r.circuit.add(ops::ControlledU{r1, a, UnitarySpec::pauli_z(p1), false});
    r.circuit.add(ops::ControlledU{r2, a, UnitarySpec::pauli_x(-p2), false});
    r.circuit.add(ops::Measure{a, MeasureBasis::computational(), "m"});
    if (d1.value() == d_ancilla.value()) {
        add_correction(r, {ops::PauliZ{r1, PowerExpr::of(-p1, "m")}, std::nullopt}, "m");
    } else {
        add_correction(r, {ops::PhaseR{r1, ThetaExpr::of(-kTwoPi * p1 / d_ancilla.value(), "m")}, std::nullopt},
                       "m");
    }
    r.register_wires = {r1, r2};
    r.ancilla_wires = {a};
    r.target = controlled_phase_matrix(d1, d2, kTwoPi * p1 * p2 / d_ancilla.value());
    r.pairwise_baseline = 4;
    finish(r);
    return r;
}

ConstructionReport batch_rotation_circuit(std::span<const int> control_powers, std::span<const int> target_powers,
                                          Dimension d_ancilla, std::span<const int> control_dims,
                                          std::span<const int> target_dims) {
    const std::size_t n = control_powers.size();
    const std::size_t m = target_powers.size();
    if (n == 0 || m == 0) {
        throw PreconditionError("batch rotation needs at least one control and one target");
    }
    if (control_dims.size() != n || target_dims.size() != m) {
        throw PreconditionError("batch rotation: one dimension per register wire required");
    }
    ConstructionReport r;
    r.scheme = "batch";
    std::vector<Wire> wires;
    std::ostringstream params;
    params << "N=" << n << " M=" << m << " da=" << d_ancilla.value() << " controls=";
    for (std::size_t j = 0; j < n; ++j) {
        wires.push_back({"c" + std::to_string(j + 1), Dimension(control_dims[j])});
        params << (j ? "," : "") << control_powers[j];
    }
    params << " targets=";
    for (std::size_t k = 0; k < m; ++k) {
        wires.push_back({"t" + std::to_string(k + 1), Dimension(target_dims[k])});
        params << (k ? "," : "") << target_powers[k];
    }
    r.parameters = params.str();
    wires.push_back({"a", d_ancilla});
    RegisterLayout register_only(std::vector<Wire>(wires.begin(), wires.end() - 1));
    r.circuit = Circuit(RegisterLayout(wires));
    const std::size_t a = n + m;
    for (std::size_t j = 0; j < n; ++j) {
        r.circuit.add(ops::ControlledU{j, a, UnitarySpec::pauli_z(control_powers[j]), false});
    }
    for (std::size_t k = 0; k < m; ++k) {
        r.circuit.add(ops::ControlledU{n + k, a, UnitarySpec::pauli_x(-target_powers[k]), false});
    }
    for (std::size_t j = 0; j < n; ++j) {
        r.circuit.add(ops::ControlledU{j, a, UnitarySpec::pauli_z(-control_powers[j]), false});
    }
    for (std::size_t k = 0; k < m; ++k) {
        r.circuit.add(ops::ControlledU{n + k, a, UnitarySpec::pauli_x(target_powers[k]), false});
    }
    r.register_wires = iota(0, n + m);
    r.ancilla_wires = {a};
    const auto size = static_cast<Eigen::Index>(register_only.size());
    r.target = Matrix::Identity(size, size);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            double theta = kTwoPi * control_powers[j] * target_powers[k] / d_ancilla.value();
            const std::size_t pair[] = {j, n + k};
            r.target = embed_unitary(controlled_phase_matrix(control_dims[j], target_dims[k], theta), pair,
                                     register_only) *
                       r.target;
        }
    }
    r.pairwise_baseline = static_cast<int>(4 * n * m);
    finish(r);
    return r;
}

Matrix multi_controlled_matrix(int n_controls, const Matrix& u) {
    if (n_controls < 1) {
        throw PreconditionError("need at least one control");
    }
    if (u.rows() != 2 || u.cols() != 2) {
        throw PreconditionError("target unitary must be 2x2");
    }
    const Eigen::Index size = Eigen::Index{2} << n_controls;
    Matrix out = Matrix::Identity(size, size);
    out.block(size - 2, size - 2, 2, 2) = u;
    return out;
}

ConstructionReport toffoli_circuit(int n_controls, Dimension d_ancilla, const UnitarySpec& u) {
    if (n_controls < 1) {
        throw PreconditionError("toffoli: need at least one control qubit");
    }
    if (d_ancilla.value() <= n_controls) {
        throw PreconditionError("toffoli: ancilla dimension " + std::to_string(d_ancilla.value()) +
                                " must exceed the control count " + std::to_string(n_controls) +
                                " (modular wraparound)");
    }
    require_fits(u, 2, "toffoli");
    const auto n = static_cast<std::size_t>(n_controls);
    ConstructionReport r;
    r.scheme = "toffoli";
    r.parameters = "N=" + std::to_string(n_controls) + " da=" + std::to_string(d_ancilla.value()) +
                   " u=" + u.describe();
    std::vector<Wire> wires;
    for (std::size_t j = 0; j < n; ++j) {
        wires.push_back({"c" + std::to_string(j + 1), 2});
    }
    wires.push_back({"t", 2});
    wires.push_back({"a", d_ancilla});
    r.circuit = Circuit(RegisterLayout(std::move(wires)));
    const std::size_t t = n, a = n + 1;
    r.circuit.set_preparation(a, Preparation::basis_state(mod_label(-n_controls, d_ancilla)));
    for (std::size_t j = 0; j < n; ++j) {
        r.circuit.add(ops::ControlledU{j, a, UnitarySpec::pauli_x(1), false});
    }
    r.circuit.add(ops::ControlledU{a, t, u, true});
    for (std::size_t j = 0; j < n; ++j) {
        r.circuit.add(ops::ControlledU{j, a, UnitarySpec::pauli_x(-1), false});
    }
    r.register_wires = iota(0, n + 1);
    r.ancilla_wires = {a};
    r.target = multi_controlled_matrix(n_controls, u.realize(2));
    finish(r);
    return r;
}

Matrix adqc_interaction(Dimension d, AdqcVariant variant) {
    Matrix cz = controlled_matrix(d, pauli_matrix(PauliKind::z, d, 1));
    Matrix locals = kron(fourier_matrix(d), fourier_matrix(d, variant == AdqcVariant::inverse_fourier_ancilla));
    return locals * cz;
}

ConstructionReport adqc_entangle_circuit(Dimension d, AdqcVariant variant) {
    ConstructionReport r;
    r.scheme = "adqc-entangle";
    r.parameters = "d=" + std::to_string(d.value()) +
                   (variant == AdqcVariant::inverse_fourier_ancilla ? " variant=finv" : " variant=f");
    r.circuit = Circuit(RegisterLayout({{"r1", d}, {"r2", d}, {"a", d}}));
    const std::size_t r1 = 0, r2 = 1, a = 2;
    r.circuit.set_preparation(a, Preparation::plus(0));
    emit_adqc_interaction(r.circuit, r1, a, variant, 0);
    emit_adqc_interaction(r.circuit, r2, a, variant, 1);
    r.circuit.add(ops::Measure{a, MeasureBasis::computational(), "m"});
    r.register_wires = {r1, r2};
    r.ancilla_wires = {a};
    DerivedCorrections derived = derive_pauli_corrections(r.circuit, r.register_wires, r.ancilla_wires, "m");
    for (GateOp& op : derived.ops) {
        add_correction(r, std::move(op), "m");
    }
    r.target = derived.reference;
    finish(r);
    return r;
}

ConstructionReport adqc_local_circuit(double theta) {
    if (!std::isfinite(theta)) {
        throw PreconditionError("adqc-local: theta must be finite");
    }
    ConstructionReport r;
    r.scheme = "adqc-local";
    std::ostringstream params;
    params.precision(12);
    params << "theta=" << theta;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r", 2}, {"a", 2}}));
    const std::size_t reg = 0, a = 1;
    r.circuit.set_preparation(a, Preparation::plus(0));
    emit_adqc_interaction(r.circuit, reg, a, AdqcVariant::inverse_fourier_ancilla, 0);
    r.circuit.add(ops::Measure{a, MeasureBasis::theta_family(ThetaExpr::constant(theta)), "m"});
    r.register_wires = {reg};
    r.ancilla_wires = {a};
    DerivedCorrections derived = derive_pauli_corrections(r.circuit, r.register_wires, r.ancilla_wires, "m");
    for (GateOp& op : derived.ops) {
        add_correction(r, std::move(op), "m");
    }
    r.target = fourier_matrix(2) * phase_matrix(2, theta);
    finish(r);
    return r;
}

Circuit adqc_direct_circuit(int register_qubits, std::span<const AdqcGate> gates) {
    if (register_qubits < 1) {
        throw PreconditionError("adqc: need at least one register qubit");
    }
    std::vector<Wire> wires;
    for (int k = 0; k < register_qubits; ++k) {
        wires.push_back({"r" + std::to_string(k), 2});
    }
    Circuit c{RegisterLayout(std::move(wires))};
    for (const AdqcGate& g : gates) {
        if (const auto* local = std::get_if<AdqcLocalGate>(&g)) {
            c.add(ops::PhaseR{local->wire, ThetaExpr::constant(local->theta)});
            c.add(ops::Fourier{local->wire, false});
        } else {
            const auto& ent = std::get<AdqcEntangleGate>(g);
            c.add(ops::ControlledU{ent.first, ent.second, UnitarySpec::pauli_z(1), false});
            c.add(ops::Fourier{ent.first, false});
            c.add(ops::Fourier{ent.second, false});
        }
    }
    c.validate();
    return c;
}

ConstructionReport adqc_compile(int register_qubits, std::span<const AdqcGate> gates) {
    Circuit direct = adqc_direct_circuit(register_qubits, gates);
    const auto n = static_cast<std::size_t>(register_qubits);
    ConstructionReport r;
    r.scheme = "adqc-compiled";
    r.parameters = "qubits=" + std::to_string(register_qubits) + " gates=" + std::to_string(gates.size());
    std::vector<Wire> wires = direct.layout.wires();
    wires.push_back({"a", 2});
    r.circuit = Circuit(RegisterLayout(std::move(wires)));
    const std::size_t a = n;
    r.circuit.set_preparation(a, Preparation::plus(0));

    for (std::size_t i = 0; i < gates.size(); ++i) {
        const std::string suffix = std::to_string(i);
        const std::string record = "m" + suffix;
        int id_offset = max_interaction_id(r.circuit) + 1;
        if (const auto* local = std::get_if<AdqcLocalGate>(&gates[i])) {
            if (local->wire >= n) {
                throw PreconditionError("adqc: gate wire out of range");
            }
            ConstructionReport gadget = adqc_local_circuit(local->theta);
            const std::size_t map[] = {local->wire, a};
            splice(r.circuit, gadget.circuit, map, suffix, id_offset);
            for (const Correction& c : gadget.corrections) {
                Circuit one{gadget.circuit.layout};
                one.ops.push_back(c.op);
                Circuit mapped{r.circuit.layout};
                splice(mapped, one, map, suffix, 0);
                r.corrections.push_back({record, mapped.ops.front()});
            }
            // Back to |+_0>: undo the measured basis, clear the label.
            r.circuit.add(ops::PhaseR{a, ThetaExpr::constant(local->theta)});
            r.circuit.add(ops::Fourier{a, true});
        } else {
            const auto& ent = std::get<AdqcEntangleGate>(gates[i]);
            if (ent.first >= n || ent.second >= n || ent.first == ent.second) {
                throw PreconditionError("adqc: entangling gate needs two distinct register wires");
            }
            ConstructionReport gadget = adqc_entangle_circuit(2);
            const std::size_t map[] = {ent.first, ent.second, a};
            splice(r.circuit, gadget.circuit, map, suffix, id_offset);
            for (const Correction& c : gadget.corrections) {
                Circuit one{gadget.circuit.layout};
                one.ops.push_back(c.op);
                Circuit mapped{r.circuit.layout};
                splice(mapped, one, map, suffix, 0);
                r.corrections.push_back({record, mapped.ops.front()});
            }
        }
        r.circuit.add(ops::PauliX{a, PowerExpr::of(-1, record)});
        r.circuit.add(ops::Fourier{a, false});
    }
    r.register_wires = iota(0, n);
    r.ancilla_wires = {a};
    r.target = circuit_unitary(direct);
    finish(r);
    return r;
}

ConstructionReport swapcz_entangle_circuit(Dimension d, double theta) {
    if (!std::isfinite(theta)) {
        throw PreconditionError("swapcz: theta must be finite");
    }
    ConstructionReport r;
    r.scheme = "swapcz";
    std::ostringstream params;
    params.precision(12);
    params << "d=" << d.value() << " theta=" << theta;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r1", d}, {"r2", d}, {"a", d}}));
    const std::size_t r1 = 0, r2 = 1, a = 2;
    emit_swap_cr(r.circuit, a, r1, theta, 0);
    emit_swap_cr(r.circuit, a, r2, theta, 1);
    emit_swap_cr(r.circuit, a, r1, theta, 2);
    r.register_wires = {r1, r2};
    r.ancilla_wires = {a};
    r.target = swap_matrix(d) * controlled_phase_matrix(d, d, theta);
    finish(r);
    return r;
}

ConstructionReport swapcz_local_circuit(Dimension d, const UnitarySpec& u, double theta) {
    require_fits(u, d, "swapcz-local");
    if (!std::isfinite(theta)) {
        throw PreconditionError("swapcz-local: theta must be finite");
    }
    ConstructionReport r;
    r.scheme = "swapcz-local";
    std::ostringstream params;
    params.precision(12);
    params << "d=" << d.value() << " u=" << u.describe() << " theta=" << theta;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r", d}, {"a", d}}));
    const std::size_t reg = 0, a = 1;
    emit_swap_cr(r.circuit, a, reg, theta, 0);
    r.circuit.ops.push_back(local_op(a, u));
    emit_swap_cr(r.circuit, a, reg, theta, 1);
    r.register_wires = {reg};
    r.ancilla_wires = {a};
    r.target = u.realize(d);
    finish(r);
    return r;
}

ConstructionReport minimal_control_circuit(int prep, const UnitarySpec& u, double theta) {
    if (prep != 0 && prep != 1) {
        throw PreconditionError("minimal-control: ancilla preparation must be 0 or 1");
    }
    require_fits(u, 2, "minimal-control");
    if (!std::isfinite(theta)) {
        throw PreconditionError("minimal-control: theta must be finite");
    }
    ConstructionReport r;
    r.scheme = "minimal";
    std::ostringstream params;
    params.precision(12);
    params << "prep=" << prep << " u=" << u.describe() << " theta=" << theta;
    r.parameters = params.str();
    r.circuit = Circuit(RegisterLayout({{"r", 2}, {"a", 2}}));
    const std::size_t reg = 0, a = 1;
    r.circuit.set_preparation(a, Preparation::basis_state(prep));
    for (int id = 0; id < 2; ++id) {
        r.circuit.add(ops::ControlledU{reg, a, UnitarySpec::phase(theta), false}, id);
        r.circuit.add(ops::Swap{reg, a}, id);
        r.circuit.ops.push_back(local_op(a, u, id));
    }
    r.register_wires = {reg};
    r.ancilla_wires = {a};
    Matrix um = u.realize(2);
    r.target = prep == 0 ? um : Matrix(phase_matrix(2, theta) * um * phase_matrix(2, theta));
    finish(r);
    return r;
}

ConstructionReport& attach_verdict(ConstructionReport& report, double tol) {
    report.verdict = verify_construction(report, tol);
    return report;
}

}  // namespace ancilla
