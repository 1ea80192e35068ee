#include "ancilla/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ancilla {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double snap(double v) {
    return (std::abs(v) < 1e-12) ? 0.0 : v;
}

std::string wire_list(const ConstructionReport& report, const std::vector<std::size_t>& wires) {
    std::ostringstream out;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        const Wire& w = report.circuit.layout.wire(wires[i]);
        out << (i ? " " : "") << w.name << "(d=" << w.dim << ")";
    }
    return out.str();
}

}  // namespace

std::string format_complex(Complex z) {
    const double re = snap(z.real());
    const double im = snap(z.imag());
    std::string out = fmt("%.9g", re);
    if (im < 0.0) {
        out += "-" + fmt("%.9g", -im);
    } else {
        out += "+" + fmt("%.9g", im);
    }
    return out + "i";
}

std::string format_matrix(const Matrix& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) {
                out += '\t';
            }
            out += format_complex(m(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string format_power(const PowerExpr& e) {
    if (!e.depends_on_record()) {
        return std::to_string(e.b);
    }
    std::string out = std::to_string(e.a) + "*" + e.record;
    if (e.b != 0) {
        out += (e.b < 0 ? "-" : "+") + std::to_string(std::abs(e.b));
    }
    return out;
}

std::string format_theta(const ThetaExpr& e) {
    if (!e.depends_on_record()) {
        return fmt("%.12g", snap(e.b));
    }
    std::string out = fmt("%.12g", e.a) + "*" + e.record;
    if (snap(e.b) != 0.0) {
        out += (e.b < 0 ? "-" : "+") + fmt("%.12g", std::abs(e.b));
    }
    return out;
}

std::string describe_op(const GateOp& op, const RegisterLayout& layout) {
    auto name = [&](std::size_t w) { return layout.wire(w).name; };
    std::string text = std::visit(
        [&](const auto& o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ops::PauliX>) {
                return "X " + name(o.wire) + " power=" + format_power(o.power);
            } else if constexpr (std::is_same_v<T, ops::PauliZ>) {
                return "Z " + name(o.wire) + " power=" + format_power(o.power);
            } else if constexpr (std::is_same_v<T, ops::Fourier>) {
                return std::string(o.inverse ? "Finv " : "F ") + name(o.wire);
            } else if constexpr (std::is_same_v<T, ops::PhaseR>) {
                return "R " + name(o.wire) + " theta=" + format_theta(o.theta);
            } else if constexpr (std::is_same_v<T, ops::LocalU>) {
                return "U " + name(o.wire) + " u=" + o.u.describe();
            } else if constexpr (std::is_same_v<T, ops::ControlledU>) {
                return std::string(o.zero_controlled ? "C0U " : "CU ") + name(o.control) + " -> " + name(o.target) +
                       " u=" + o.u.describe();
            } else if constexpr (std::is_same_v<T, ops::Sum>) {
                return "SUM " + name(o.control) + " -> " + name(o.target);
            } else if constexpr (std::is_same_v<T, ops::Swap>) {
                return "SWAP " + name(o.a) + " " + name(o.b);
            } else {
                std::string basis =
                    o.basis.theta_basis ? "theta=" + format_theta(o.basis.theta) : std::string("computational");
                return "MEASURE " + name(o.wire) + " basis=" + basis + " record=" + o.record;
            }
        },
        op.kind);
    if (op.interaction) {
        text += " [interaction " + std::to_string(*op.interaction) + "]";
    }
    return text;
}

std::string format_report(const ConstructionReport& report) {
    std::ostringstream out;
    const RegisterLayout& layout = report.circuit.layout;
    out << "scheme: " << report.scheme << '\n';
    out << "parameters: " << report.parameters << '\n';
    out << "register: " << wire_list(report, report.register_wires) << '\n';
    out << "ancillas: " << wire_list(report, report.ancilla_wires) << '\n';
    for (std::size_t w : report.ancilla_wires) {
        Preparation p = report.circuit.preparation(w);
        out << "prepare " << layout.wire(w).name << ": "
            << (p.basis == Preparation::Basis::conjugate ? "|+" : "|") << p.label << ">\n";
    }
    out << "ops: " << report.circuit.ops.size() << '\n';
    out << "interactions: " << report.interaction_count << '\n';
    out << "pairwise baseline: "
        << (report.pairwise_baseline ? std::to_string(*report.pairwise_baseline) : std::string("n/a")) << '\n';
    out << "measurements: " << report.circuit.measurement_count() << '\n';
    out << "corrections: " << report.corrections.size() << '\n';
    for (const Correction& c : report.corrections) {
        out << "  on " << c.record << ": " << describe_op(c.op, layout) << '\n';
    }
    out << "circuit:\n";
    for (const GateOp& op : report.circuit.ops) {
        out << "  " << describe_op(op, layout) << '\n';
    }
    if (report.verdict) {
        const FidelityVerdict& v = *report.verdict;
        out << "fidelity: " << fmt("%.12g", v.fidelity) << '\n';
        out << "min ancilla purity: " << fmt("%.12g", v.min_ancilla_purity) << '\n';
        out << "branches: " << v.branch_count << '\n';
        out << "ancilla disentangled: " << (v.ancilla_disentangled ? "yes" : "no") << '\n';
        out << "verdict: " << (v.pass ? "pass" : "fail") << " (tol " << fmt("%.3g", v.tolerance) << ")\n";
    } else {
        out << "fidelity: unverified\n";
    }
    return out.str();
}

}  // namespace ancilla
