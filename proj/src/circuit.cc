#include "ancilla/circuit.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ancilla/errors.h"

namespace ancilla {

RegisterLayout::RegisterLayout(std::vector<Wire> wires, std::uint64_t amplitude_cap)
    : wires_(std::move(wires)), strides_(wires_.size()) {
    std::set<std::string> names;
    for (const Wire& w : wires_) {
        if (w.dim < 2) {
            throw InvalidDimensionError("wire '" + w.name + "' has dimension " + std::to_string(w.dim));
        }
        if (!names.insert(w.name).second) {
            throw PreconditionError("duplicate wire name '" + w.name + "'");
        }
    }
    size_ = 1;
    for (std::size_t k = wires_.size(); k-- > 0;) {
        strides_[k] = size_;
        if (size_ > amplitude_cap / static_cast<std::uint64_t>(wires_[k].dim)) {
            throw SizeCapError("register exceeds amplitude cap of " + std::to_string(amplitude_cap));
        }
        size_ *= static_cast<std::uint64_t>(wires_[k].dim);
    }
}

std::optional<std::size_t> RegisterLayout::find(const std::string& name) const {
    for (std::size_t k = 0; k < wires_.size(); ++k) {
        if (wires_[k].name == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::size_t RegisterLayout::index_of(const std::string& name) const {
    if (auto k = find(name)) {
        return *k;
    }
    throw PreconditionError("unknown wire '" + name + "'");
}

std::uint64_t RegisterLayout::amp_index(std::span<const int> labels) const {
    if (labels.size() != wires_.size()) {
        throw PreconditionError("expected " + std::to_string(wires_.size()) + " labels, got " +
                                std::to_string(labels.size()));
    }
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < wires_.size(); ++k) {
        if (labels[k] < 0 || labels[k] >= wires_[k].dim) {
            throw PreconditionError("label " + std::to_string(labels[k]) + " out of range on wire '" +
                                    wires_[k].name + "'");
        }
        index += static_cast<std::uint64_t>(labels[k]) * strides_[k];
    }
    return index;
}

std::vector<int> RegisterLayout::unindex(std::uint64_t index) const {
    if (index >= size_) {
        throw PreconditionError("amplitude index out of range");
    }
    std::vector<int> labels(wires_.size());
    for (std::size_t k = 0; k < wires_.size(); ++k) {
        labels[k] = label_of(index, k);
    }
    return labels;
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
    if (wires_.size() != other.wires_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < wires_.size(); ++k) {
        if (wires_[k].name != other.wires_[k].name || wires_[k].dim != other.wires_[k].dim) {
            return false;
        }
    }
    return true;
}

UnitarySpec UnitarySpec::matrix(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 2) {
        throw PreconditionError("explicit unitary must be square with size >= 2");
    }
    if (!is_unitary(m)) {
        throw PreconditionError("explicit matrix is not unitary");
    }
    UnitarySpec s;
    s.kind = Kind::matrix;
    s.explicit_matrix = std::move(m);
    return s;
}

bool UnitarySpec::fits(int d) const {
    return kind != Kind::matrix || explicit_matrix.rows() == d;
}

Matrix UnitarySpec::realize(Dimension d) const {
    switch (kind) {
        case Kind::identity:
            return identity_matrix(d);
        case Kind::x:
            return pauli_matrix(PauliKind::x, d, power);
        case Kind::z:
            return pauli_matrix(PauliKind::z, d, power);
        case Kind::fourier:
            return fourier_matrix(d, false);
        case Kind::fourier_inverse:
            return fourier_matrix(d, true);
        case Kind::phase:
            return phase_matrix(d, theta);
        case Kind::matrix:
            if (explicit_matrix.rows() != d) {
                throw PreconditionError("explicit unitary of size " + std::to_string(explicit_matrix.rows()) +
                                        " applied to a wire of dimension " + std::to_string(d.value()));
            }
            return explicit_matrix;
    }
    return identity_matrix(d);
}

Matrix UnitarySpec::power_of(Dimension d, int m) const {
    switch (kind) {
        case Kind::x:
            return pauli_matrix(PauliKind::x, d, power * m);
        case Kind::z:
            return pauli_matrix(PauliKind::z, d, power * m);
        case Kind::phase:
            return phase_matrix(d, theta * m);
        default:
            return matrix_power(realize(d), m);
    }
}

std::string UnitarySpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::identity:
            return "I";
        case Kind::x:
            out << "X(" << power << ")";
            break;
        case Kind::z:
            out << "Z(" << power << ")";
            break;
        case Kind::fourier:
            return "F";
        case Kind::fourier_inverse:
            return "Finv";
        case Kind::phase:
            out.precision(12);
            out << "R(" << theta << ")";
            break;
        case Kind::matrix:
            out << "U[" << explicit_matrix.rows() << "x" << explicit_matrix.cols() << "]";
            break;
    }
    return out.str();
}

std::vector<std::size_t> GateOp::wires() const {
    return std::visit(
        [](const auto& o) -> std::vector<std::size_t> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ops::ControlledU> || std::is_same_v<T, ops::Sum>) {
                return {o.control, o.target};
            } else if constexpr (std::is_same_v<T, ops::Swap>) {
                return {o.a, o.b};
            } else {
                return {o.wire};
            }
        },
        kind);
}

Vector Preparation::vector(Dimension d) const {
    if (label < 0 || label >= d) {
        throw PreconditionError("preparation label " + std::to_string(label) + " out of range");
    }
    if (basis == Basis::conjugate) {
        return conjugate_state(d, label);
    }
    Vector v = Vector::Zero(d);
    v(label) = 1.0;
    return v;
}

Preparation Circuit::preparation(std::size_t wire) const {
    if (wire < preparations.size()) {
        return preparations[wire];
    }
    return {};
}

void Circuit::set_preparation(std::size_t wire, Preparation p) {
    if (wire >= layout.wire_count()) {
        throw PreconditionError("preparation for unknown wire");
    }
    if (preparations.size() < layout.wire_count()) {
        preparations.resize(layout.wire_count());
    }
    preparations[wire] = p;
}

std::size_t Circuit::measurement_count() const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [](const GateOp& op) { return op.is_measurement(); }));
}

namespace {

template <typename Expr>
void check_expr(const Expr& e, const std::set<std::string>& written, std::size_t op_index) {
    if (e.depends_on_record() && !written.contains(e.record)) {
        throw PreconditionError("op " + std::to_string(op_index) + " reads record '" + e.record +
                                "' before it is measured");
    }
    if constexpr (std::is_floating_point_v<decltype(e.a)>) {
        if (!std::isfinite(e.a) || !std::isfinite(e.b)) {
            throw PreconditionError("op " + std::to_string(op_index) + " has a non-finite angle");
        }
    }
}

}  // namespace

void Circuit::validate() const {
    const std::size_t n = layout.wire_count();
    if (!preparations.empty()) {
        if (preparations.size() != n) {
            throw PreconditionError("preparation list does not match wire count");
        }
        for (std::size_t k = 0; k < n; ++k) {
            (void)preparations[k].vector(layout.dim(k));
        }
    }
    std::set<std::string> written;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const GateOp& op = ops[i];
        std::vector<std::size_t> ws = op.wires();
        for (std::size_t w : ws) {
            if (w >= n) {
                throw PreconditionError("op " + std::to_string(i) + " references a missing wire");
            }
        }
        if (ws.size() == 2 && ws[0] == ws[1]) {
            throw PreconditionError("op " + std::to_string(i) + " uses the same wire twice");
        }
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, ops::PauliX> || std::is_same_v<T, ops::PauliZ>) {
                    check_expr(o.power, written, i);
                } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                    check_expr(o.theta, written, i);
                } else if constexpr (std::is_same_v<T, ops::LocalU>) {
                    if (!o.u.fits(layout.dim(o.wire))) {
                        throw PreconditionError("op " + std::to_string(i) + ": unitary size mismatch");
                    }
                } else if constexpr (std::is_same_v<T, ops::ControlledU>) {
                    if (!o.u.fits(layout.dim(o.target))) {
                        throw PreconditionError("op " + std::to_string(i) + ": unitary size mismatch");
                    }
                } else if constexpr (std::is_same_v<T, ops::Swap>) {
                    if (layout.dim(o.a) != layout.dim(o.b)) {
                        throw PreconditionError("op " + std::to_string(i) + ": SWAP needs equal dimensions");
                    }
                } else if constexpr (std::is_same_v<T, ops::Measure>) {
                    if (o.basis.theta_basis) {
                        check_expr(o.basis.theta, written, i);
                    }
                    if (o.record.empty()) {
                        throw PreconditionError("op " + std::to_string(i) + ": measurement needs a record name");
                    }
                    if (!written.insert(o.record).second) {
                        throw PreconditionError("record '" + o.record + "' written more than once");
                    }
                }
            },
            op.kind);
    }
    if (!records.empty()) {
        std::set<std::string> declared(records.begin(), records.end());
        if (declared.size() != records.size()) {
            throw PreconditionError("duplicate record declaration");
        }
        if (declared != written) {
            throw PreconditionError("declared records do not match the measured records");
        }
    }
}

void RecordTable::set(const std::string& name, int outcome) {
    if (find(name)) {
        throw PreconditionError("record '" + name + "' written more than once");
    }
    entries_.push_back({name, outcome});
}

std::optional<int> RecordTable::find(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) {
            return e.outcome;
        }
    }
    return std::nullopt;
}

int RecordTable::get(const std::string& name) const {
    if (auto v = find(name)) {
        return *v;
    }
    throw PreconditionError("unresolved record '" + name + "'");
}

std::int64_t resolve(const PowerExpr& e, const RecordTable& records) {
    if (!e.depends_on_record()) {
        return e.b;
    }
    return e.a * records.get(e.record) + e.b;
}

double resolve(const ThetaExpr& e, const RecordTable& records) {
    if (!e.depends_on_record()) {
        return e.b;
    }
    return e.a * records.get(e.record) + e.b;
}

int count_interactions(const Circuit& circuit, std::span<const std::size_t> ancillas) {
    std::set<int> groups;
    int ungrouped = 0;
    for (const GateOp& op : circuit.ops) {
        std::vector<std::size_t> ws = op.wires();
        if (ws.size() != 2) {
            continue;
        }
        bool touches = std::any_of(ws.begin(), ws.end(), [&](std::size_t w) {
            return std::find(ancillas.begin(), ancillas.end(), w) != ancillas.end();
        });
        if (!touches) {
            continue;
        }
        if (op.interaction) {
            groups.insert(*op.interaction);
        } else {
            ++ungrouped;
        }
    }
    return static_cast<int>(groups.size()) + ungrouped;
}

}  // namespace ancilla
