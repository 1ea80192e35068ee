#include "ancilla/circuit_io.h"

#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "ancilla/errors.h"

namespace ancilla {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::abs(d) < 9e15) {
            return static_cast<std::int64_t>(d);
        }
    }
    fail(path, "expected an integer");
}

double as_real(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

PowerExpr parse_power(const json& v, const std::string& path) {
    if (v.is_object()) {
        PowerExpr e;
        e.a = v.contains("a") ? as_integer(v["a"], path + ".a") : 1;
        e.b = v.contains("b") ? as_integer(v["b"], path + ".b") : 0;
        const json& m = field(v, "m", path);
        if (!m.is_string()) {
            fail(path + ".m", "expected a record name");
        }
        e.record = m.get<std::string>();
        return e;
    }
    return PowerExpr::constant(as_integer(v, path));
}

ThetaExpr parse_theta(const json& v, const std::string& path) {
    if (v.is_object()) {
        ThetaExpr e;
        e.a = v.contains("a") ? as_real(v["a"], path + ".a") : 1.0;
        e.b = v.contains("b") ? as_real(v["b"], path + ".b") : 0.0;
        const json& m = field(v, "m", path);
        if (!m.is_string()) {
            fail(path + ".m", "expected a record name");
        }
        e.record = m.get<std::string>();
        return e;
    }
    return ThetaExpr::constant(as_real(v, path));
}

UnitarySpec parse_unitary(const json& v, const std::string& path) {
    std::string kind;
    if (v.is_string()) {
        kind = v.get<std::string>();
    } else if (v.is_object()) {
        const json& k = field(v, "kind", path);
        if (!k.is_string()) {
            fail(path + ".kind", "expected a string");
        }
        kind = k.get<std::string>();
    } else {
        fail(path, "expected a unitary description");
    }
    if (kind == "I") {
        return UnitarySpec::identity();
    }
    if (kind == "X" || kind == "Z") {
        std::int64_t p = v.is_object() && v.contains("power") ? as_integer(v["power"], path + ".power") : 1;
        return kind == "X" ? UnitarySpec::pauli_x(p) : UnitarySpec::pauli_z(p);
    }
    if (kind == "F" || kind == "H") {
        return UnitarySpec::fourier(false);
    }
    if (kind == "Finv") {
        return UnitarySpec::fourier(true);
    }
    if (kind == "R") {
        if (!v.is_object()) {
            fail(path, "R needs a theta");
        }
        return UnitarySpec::phase(as_real(field(v, "theta", path), path + ".theta"));
    }
    if (kind == "matrix") {
        if (!v.is_object()) {
            fail(path, "matrix needs rows");
        }
        const json& rows = field(v, "rows", path);
        if (!rows.is_array() || rows.empty()) {
            fail(path + ".rows", "expected a non-empty array");
        }
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const json& row = rows[static_cast<std::size_t>(r)];
            std::string rp = path + ".rows[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                fail(rp, "expected a row of length " + std::to_string(n));
            }
            for (Eigen::Index c = 0; c < n; ++c) {
                const json& z = row[static_cast<std::size_t>(c)];
                std::string zp = rp + "[" + std::to_string(c) + "]";
                if (z.is_number()) {
                    m(r, c) = Complex(z.get<double>(), 0.0);
                } else if (z.is_array() && z.size() == 2) {
                    m(r, c) = Complex(as_real(z[0], zp), as_real(z[1], zp));
                } else {
                    fail(zp, "expected a number or [re, im]");
                }
            }
        }
        try {
            return UnitarySpec::matrix(std::move(m));
        } catch (const PreconditionError& e) {
            fail(path, e.what());
        }
    }
    fail(path, "unknown unitary kind '" + kind + "'");
}

json unitary_to_json(const UnitarySpec& u) {
    switch (u.kind) {
        case UnitarySpec::Kind::identity:
            return "I";
        case UnitarySpec::Kind::x:
            return {{"kind", "X"}, {"power", u.power}};
        case UnitarySpec::Kind::z:
            return {{"kind", "Z"}, {"power", u.power}};
        case UnitarySpec::Kind::fourier:
            return "F";
        case UnitarySpec::Kind::fourier_inverse:
            return "Finv";
        case UnitarySpec::Kind::phase:
            return {{"kind", "R"}, {"theta", u.theta}};
        case UnitarySpec::Kind::matrix: {
            json rows = json::array();
            for (Eigen::Index r = 0; r < u.explicit_matrix.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index c = 0; c < u.explicit_matrix.cols(); ++c) {
                    row.push_back({u.explicit_matrix(r, c).real(), u.explicit_matrix(r, c).imag()});
                }
                rows.push_back(std::move(row));
            }
            return {{"kind", "matrix"}, {"rows", std::move(rows)}};
        }
    }
    return nullptr;
}

template <typename Expr>
json expr_to_json(const Expr& e) {
    if (!e.depends_on_record()) {
        return e.b;
    }
    return {{"a", e.a}, {"m", e.record}, {"b", e.b}};
}

class WireResolver {
  public:
    explicit WireResolver(const RegisterLayout& layout) : layout_(layout) {}

    std::size_t operator()(const json& op, const char* key, const std::string& path) const {
        const json& v = field(op, key, path);
        std::string p = path + "." + key;
        if (v.is_string()) {
            auto idx = layout_.find(v.get<std::string>());
            if (!idx) {
                fail(p, "unknown wire '" + v.get<std::string>() + "'");
            }
            return *idx;
        }
        std::int64_t k = as_integer(v, p);
        if (k < 0 || static_cast<std::size_t>(k) >= layout_.wire_count()) {
            fail(p, "wire index out of range");
        }
        return static_cast<std::size_t>(k);
    }

  private:
    const RegisterLayout& layout_;
};

GateOp parse_op(const json& op, const std::string& path, const WireResolver& wire) {
    if (!op.is_object()) {
        fail(path, "expected an object");
    }
    const json& tag = field(op, "gate", path);
    if (!tag.is_string()) {
        fail(path + ".gate", "expected a string");
    }
    const std::string g = tag.get<std::string>();
    GateOp out{ops::Sum{0, 0}, std::nullopt};
    if (op.contains("interaction")) {
        out.interaction = static_cast<int>(as_integer(op["interaction"], path + ".interaction"));
    }
    auto power = [&] { return op.contains("power") ? parse_power(op["power"], path + ".power") : PowerExpr::constant(1); };
    if (g == "X") {
        out.kind = ops::PauliX{wire(op, "wire", path), power()};
    } else if (g == "Z") {
        out.kind = ops::PauliZ{wire(op, "wire", path), power()};
    } else if (g == "F" || g == "Finv") {
        out.kind = ops::Fourier{wire(op, "wire", path), g == "Finv"};
    } else if (g == "R") {
        out.kind = ops::PhaseR{wire(op, "wire", path), parse_theta(field(op, "theta", path), path + ".theta")};
    } else if (g == "U") {
        out.kind = ops::LocalU{wire(op, "wire", path), parse_unitary(field(op, "u", path), path + ".u")};
    } else if (g == "CU" || g == "C0U") {
        out.kind = ops::ControlledU{wire(op, "control", path), wire(op, "target", path),
                                    parse_unitary(field(op, "u", path), path + ".u"), g == "C0U"};
    } else if (g == "SUM") {
        out.kind = ops::Sum{wire(op, "control", path), wire(op, "target", path)};
    } else if (g == "SWAP") {
        out.kind = ops::Swap{wire(op, "a", path), wire(op, "b", path)};
    } else if (g == "MEASURE") {
        MeasureBasis basis = MeasureBasis::computational();
        if (op.contains("basis")) {
            const json& b = op["basis"];
            if (b.is_string() && b.get<std::string>() == "computational") {
            } else if (b.is_object() && b.contains("theta")) {
                basis = MeasureBasis::theta_family(parse_theta(b["theta"], path + ".basis.theta"));
            } else {
                fail(path + ".basis", "expected \"computational\" or {\"theta\": ...}");
            }
        }
        const json& rec = field(op, "record", path);
        if (!rec.is_string() || rec.get<std::string>().empty()) {
            fail(path + ".record", "expected a record name");
        }
        out.kind = ops::Measure{wire(op, "wire", path), basis, rec.get<std::string>()};
    } else {
        fail(path + ".gate", "unknown gate tag '" + g + "'");
    }
    return out;
}

json op_to_json(const GateOp& op, const RegisterLayout& layout) {
    auto name = [&](std::size_t w) { return layout.wire(w).name; };
    json out = std::visit(
        [&](const auto& o) -> json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ops::PauliX>) {
                return {{"gate", "X"}, {"wire", name(o.wire)}, {"power", expr_to_json(o.power)}};
            } else if constexpr (std::is_same_v<T, ops::PauliZ>) {
                return {{"gate", "Z"}, {"wire", name(o.wire)}, {"power", expr_to_json(o.power)}};
            } else if constexpr (std::is_same_v<T, ops::Fourier>) {
                return {{"gate", o.inverse ? "Finv" : "F"}, {"wire", name(o.wire)}};
            } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                return {{"gate", "R"}, {"wire", name(o.wire)}, {"theta", expr_to_json(o.theta)}};
            } else if constexpr (std::is_same_v<T, ops::LocalU>) {
                return {{"gate", "U"}, {"wire", name(o.wire)}, {"u", unitary_to_json(o.u)}};
            } else if constexpr (std::is_same_v<T, ops::ControlledU>) {
                return {{"gate", o.zero_controlled ? "C0U" : "CU"},
                        {"control", name(o.control)},
                        {"target", name(o.target)},
                        {"u", unitary_to_json(o.u)}};
            } else if constexpr (std::is_same_v<T, ops::Sum>) {
                return {{"gate", "SUM"}, {"control", name(o.control)}, {"target", name(o.target)}};
            } else if constexpr (std::is_same_v<T, ops::Swap>) {
                return {{"gate", "SWAP"}, {"a", name(o.a)}, {"b", name(o.b)}};
            } else {
                json basis = o.basis.theta_basis ? json{{"theta", expr_to_json(o.basis.theta)}} : json("computational");
                return {{"gate", "MEASURE"}, {"wire", name(o.wire)}, {"basis", basis}, {"record", o.record}};
            }
        },
        op.kind);
    if (op.interaction) {
        out["interaction"] = *op.interaction;
    }
    return out;
}

json circuit_to_json(const Circuit& circuit) {
    json wires = json::array();
    for (std::size_t k = 0; k < circuit.layout.wire_count(); ++k) {
        const Wire& w = circuit.layout.wire(k);
        json entry = {{"name", w.name}, {"dim", w.dim}};
        Preparation p = circuit.preparation(k);
        if (p != Preparation{}) {
            entry["prep"] = {{"basis", p.basis == Preparation::Basis::conjugate ? "conjugate" : "computational"},
                             {"label", p.label}};
        }
        wires.push_back(std::move(entry));
    }
    json ops = json::array();
    for (const GateOp& op : circuit.ops) {
        ops.push_back(op_to_json(op, circuit.layout));
    }
    return {{"wires", std::move(wires)}, {"records", circuit.records}, {"ops", std::move(ops)}};
}

}  // namespace

Circuit parse_circuit_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte) + ": malformed document: " + e.what());
    }
    if (!doc.is_object()) {
        fail("$", "expected an object");
    }
    const json& wires_json = field(doc, "wires", "$");
    if (!wires_json.is_array()) {
        fail("$.wires", "expected an array");
    }
    std::vector<Wire> wires;
    std::vector<std::pair<std::size_t, Preparation>> preps;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t k = 0; k < wires_json.size(); ++k) {
        const json& w = wires_json[k];
        std::string path = "$.wires[" + std::to_string(k) + "]";
        if (!w.is_object()) {
            fail(path, "expected an object");
        }
        const json& name = field(w, "name", path);
        if (!name.is_string()) {
            fail(path + ".name", "expected a string");
        }
        if (!seen.emplace(name.get<std::string>(), k).second) {
            fail(path + ".name", "duplicate wire name '" + name.get<std::string>() + "'");
        }
        std::int64_t dim = as_integer(field(w, "dim", path), path + ".dim");
        if (dim < 2 || dim > (1 << 24)) {
            fail(path + ".dim", "dimension must be at least 2");
        }
        wires.push_back({name.get<std::string>(), Dimension(static_cast<int>(dim))});
        if (w.contains("prep")) {
            const json& p = w["prep"];
            std::string pp = path + ".prep";
            if (!p.is_object()) {
                fail(pp, "expected an object");
            }
            Preparation prep;
            if (p.contains("basis")) {
                const json& b = p["basis"];
                if (b == "conjugate") {
                    prep.basis = Preparation::Basis::conjugate;
                } else if (b != "computational") {
                    fail(pp + ".basis", "expected \"computational\" or \"conjugate\"");
                }
            }
            std::int64_t label = p.contains("label") ? as_integer(p["label"], pp + ".label") : 0;
            if (label < 0 || label >= dim) {
                fail(pp + ".label", "label out of range");
            }
            prep.label = static_cast<int>(label);
            preps.emplace_back(k, prep);
        }
    }
    Circuit circuit{RegisterLayout(std::move(wires))};
    for (const auto& [k, p] : preps) {
        circuit.set_preparation(k, p);
    }
    const json& ops_json = field(doc, "ops", "$");
    if (!ops_json.is_array()) {
        fail("$.ops", "expected an array");
    }
    WireResolver resolver(circuit.layout);
    for (std::size_t i = 0; i < ops_json.size(); ++i) {
        circuit.ops.push_back(parse_op(ops_json[i], "$.ops[" + std::to_string(i) + "]", resolver));
    }
    if (doc.contains("records")) {
        const json& r = doc["records"];
        if (!r.is_array()) {
            fail("$.records", "expected an array of names");
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!r[i].is_string()) {
                fail("$.records[" + std::to_string(i) + "]", "expected a string");
            }
            circuit.records.push_back(r[i].get<std::string>());
        }
    } else {
        for (const GateOp& op : circuit.ops) {
            if (const auto* m = std::get_if<ops::Measure>(&op.kind)) {
                circuit.records.push_back(m->record);
            }
        }
    }
    try {
        circuit.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("$.ops: ") + e.what());
    }
    return circuit;
}

std::string serialize_circuit(const Circuit& circuit) {
    return circuit_to_json(circuit).dump(2) + "\n";
}

std::string serialize_report(const ConstructionReport& report) {
    json target = json::array();
    for (Eigen::Index r = 0; r < report.target.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.target.cols(); ++c) {
            row.push_back({report.target(r, c).real(), report.target(r, c).imag()});
        }
        target.push_back(std::move(row));
    }
    json corrections = json::array();
    for (const Correction& c : report.corrections) {
        corrections.push_back({{"record", c.record}, {"op", op_to_json(c.op, report.circuit.layout)}});
    }
    json counts = {{"interactions", report.interaction_count},
                   {"pairwise_baseline", report.pairwise_baseline ? json(*report.pairwise_baseline) : json(nullptr)},
                   {"measurements", report.circuit.measurement_count()},
                   {"ops", report.circuit.ops.size()}};
    json doc = {{"scheme", report.scheme},
                {"parameters", report.parameters},
                {"target", std::move(target)},
                {"counts", std::move(counts)},
                {"corrections", std::move(corrections)},
                {"circuit", circuit_to_json(report.circuit)}};
    if (report.verdict) {
        doc["fidelity"] = report.verdict->fidelity;
        doc["pass"] = report.verdict->pass;
        doc["ancilla_disentangled"] = report.verdict->ancilla_disentangled;
    } else {
        doc["fidelity"] = "unverified";
    }
    return doc.dump(2) + "\n";
}

}  // namespace ancilla
