#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ancilla/circuit_io.h"
#include "ancilla/constructions.h"
#include "ancilla/engine.h"
#include "ancilla/errors.h"
#include "ancilla/oracle.h"
#include "ancilla/prng.h"

namespace ancilla::cli {

const std::vector<std::string> kSchemes = {"geometric", "measured", "batch",  "toffoli", "adqc-entangle",
                                           "adqc-local", "swapcz",  "swapcz-local", "minimal"};

namespace {

long long parse_int(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw PreconditionError("parameter " + key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

class ParamReader {
  public:
    ParamReader(const std::string& scheme, const Params& params) : scheme_(scheme), params_(params) {}

    bool has(const std::string& key) const { return params_.count(key) != 0; }

    int integer(const std::string& key, int fallback) {
        auto it = lookup(key);
        return it ? static_cast<int>(parse_int(key, *it)) : fallback;
    }
    double angle(const std::string& key, double fallback) {
        auto it = lookup(key);
        if (!it) {
            return fallback;
        }
        try {
            return parse_angle(*it);
        } catch (const PreconditionError& e) {
            throw PreconditionError("parameter " + key + ": " + e.what());
        }
    }
    UnitarySpec unitary(const std::string& key, const std::string& fallback) {
        auto it = lookup(key);
        return parse_unitary_name(it ? *it : fallback);
    }
    std::string text(const std::string& key, const std::string& fallback) {
        auto it = lookup(key);
        return it ? *it : fallback;
    }
    std::vector<int> list(const std::string& key, std::size_t n, int fallback) {
        auto it = lookup(key);
        if (!it) {
            return std::vector<int>(n, fallback);
        }
        std::vector<int> out;
        std::stringstream ss(*it);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(static_cast<int>(parse_int(key, item)));
        }
        return out;
    }
    void finish() const {
        for (const auto& [k, v] : params_) {
            if (!used_.count(k)) {
                throw PreconditionError("scheme " + scheme_ + ": unknown parameter '" + k + "'");
            }
        }
    }

  private:
    std::optional<std::string> lookup(const std::string& key) {
        used_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::string scheme_;
    const Params& params_;
    std::set<std::string> used_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw PreconditionError("cannot write " + path);
    }
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string ket(const RegisterLayout& layout, std::uint64_t index) {
    std::string out = "|";
    for (std::size_t k = 0; k < layout.wire_count(); ++k) {
        out += (k ? "," : "") + std::to_string(layout.label_of(index, k));
    }
    return out + ">";
}

Outcome do_run(const RunCommand& cmd) {
    if (cmd.shots < 1 || cmd.top < 0) {
        throw PreconditionError("--shots must be at least 1 and --top non-negative");
    }
    Circuit circuit = parse_circuit_file(read_file(cmd.file));
    Outcome result;
    std::ostringstream out;
    for (int shot = 0; shot < cmd.shots; ++shot) {
        const std::uint64_t seed = shot_seed(cmd.seed, static_cast<std::uint64_t>(shot));
        RunResult r = run(circuit, prepared_state(circuit), seed);
        out << "shot " << shot << " seed " << seed << ":";
        if (r.records.empty()) {
            out << " (no measurements)";
        }
        for (const MeasurementRecord& m : r.records.entries()) {
            out << " " << m.name << "=" << m.outcome;
        }
        out << '\n';
        const auto amps = r.final_state.amplitudes();
        std::vector<std::uint64_t> order(amps.size());
        for (std::uint64_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cmd.top), order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::uint64_t a, std::uint64_t b) {
                              double pa = std::norm(amps[a]), pb = std::norm(amps[b]);
                              return pa != pb ? pa > pb : a < b;
                          });
        for (std::size_t i = 0; i < k; ++i) {
            const Complex z = amps[order[i]];
            if (std::norm(z) < 1e-15) {
                break;
            }
            out << "  " << ket(circuit.layout, order[i]) << " " << format_complex(z) << " p="
                << fmt("%.9g", std::norm(z)) << '\n';
        }
    }
    result.out = out.str();
    return result;
}

Outcome do_unitary(const UnitaryCommand& cmd) {
    Circuit circuit = parse_circuit_file(read_file(cmd.file));
    if (circuit.measurement_count() > 0) {
        throw PreconditionError("unitary: circuit contains measurements");
    }
    return {kOk, format_matrix(circuit_unitary(circuit)), {}};
}

Outcome do_build(const BuildCommand& cmd) {
    ConstructionReport report = build_scheme(cmd.scheme, cmd.params);
    if (cmd.verify) {
        attach_verdict(report, cmd.tol);
    }
    const std::string text = format_report(report);
    if (!cmd.out.empty()) {
        write_file(cmd.out, text);
    }
    if (!cmd.circuit_out.empty()) {
        write_file(cmd.circuit_out, serialize_circuit(report.circuit));
    }
    if (!cmd.json_out.empty()) {
        write_file(cmd.json_out, serialize_report(report));
    }
    int code = (report.verdict && !report.verdict->pass) ? kVerificationFailure : kOk;
    return {code, text, {}};
}

Outcome do_verify(const VerifyCommand& cmd) {
    ConstructionReport report = build_scheme(cmd.scheme, cmd.params);
    attach_verdict(report, cmd.tol);
    const FidelityVerdict& v = *report.verdict;
    std::ostringstream out;
    out << "scheme: " << report.scheme << '\n'
        << "parameters: " << report.parameters << '\n'
        << "fidelity: " << fmt("%.12g", v.fidelity) << '\n'
        << "min ancilla purity: " << fmt("%.12g", v.min_ancilla_purity) << '\n'
        << "branches: " << v.branch_count << '\n'
        << "interactions: " << report.interaction_count << '\n';
    if (!v.ancilla_disentangled) {
        out << "verdict: fail (ancilla not disentangled)\n";
    } else {
        out << "verdict: " << (v.pass ? "pass" : "fail (fidelity below 1 - tol)") << '\n';
    }
    return {v.pass ? kOk : kVerificationFailure, out.str(), {}};
}

Outcome do_counts(const CountsCommand& cmd) {
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& [key, value] : cmd.ranges) {
        std::vector<std::string> values;
        auto dots = value.find("..");
        if (dots == std::string::npos) {
            values.push_back(value);
        } else {
            long long lo = parse_int(key, value.substr(0, dots));
            long long hi = parse_int(key, value.substr(dots + 2));
            if (hi < lo || hi - lo > 64) {
                throw PreconditionError("parameter " + key + ": bad range '" + value + "'");
            }
            for (long long v = lo; v <= hi; ++v) {
                values.push_back(std::to_string(v));
            }
        }
        axes.emplace_back(key, std::move(values));
    }
    std::ostringstream out;
    std::vector<std::size_t> pos(axes.size(), 0);
    while (true) {
        Params params;
        std::string label;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            params[axes[i].first] = axes[i].second[pos[i]];
            label += (i ? " " : "") + axes[i].first + "=" + axes[i].second[pos[i]];
        }
        ConstructionReport report = build_scheme(cmd.scheme, params);
        out << cmd.scheme << (label.empty() ? "" : " ") << label << ": interactions: " << report.interaction_count
            << "; pairwise baseline: "
            << (report.pairwise_baseline ? std::to_string(*report.pairwise_baseline) : std::string("n/a")) << '\n';
        std::size_t i = axes.size();
        while (i > 0) {
            --i;
            if (++pos[i] < axes[i].second.size()) {
                break;
            }
            pos[i] = 0;
            if (i == 0) {
                return {kOk, out.str(), {}};
            }
        }
        if (axes.empty()) {
            return {kOk, out.str(), {}};
        }
    }
}

Params parse_params(const std::vector<std::string>& tokens) {
    Params out;
    for (const std::string& t : tokens) {
        auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw PreconditionError("expected key=value, got '" + t + "'");
        }
        if (!out.emplace(t.substr(0, eq), t.substr(eq + 1)).second) {
            throw PreconditionError("parameter given twice: " + t.substr(0, eq));
        }
    }
    return out;
}

}  // namespace

double parse_angle(const std::string& text) {
    const std::string s = text;
    auto pi = s.find("pi");
    std::size_t used = 0;
    double value = 0.0;
    try {
        if (pi == std::string::npos) {
            value = std::stod(s, &used);
            if (used != s.size()) {
                throw PreconditionError("bad angle");
            }
        } else {
            std::string coeff = s.substr(0, pi);
            double c = 1.0;
            if (coeff == "-") {
                c = -1.0;
            } else if (!coeff.empty() && coeff != "+") {
                c = std::stod(coeff, &used);
                if (used != coeff.size()) {
                    throw PreconditionError("bad angle");
                }
            }
            double denom = 1.0;
            std::string rest = s.substr(pi + 2);
            if (!rest.empty()) {
                if (rest[0] != '/') {
                    throw PreconditionError("bad angle");
                }
                denom = std::stod(rest.substr(1), &used);
                if (used != rest.size() - 1 || denom == 0.0) {
                    throw PreconditionError("bad angle");
                }
            }
            value = c * std::numbers::pi / denom;
        }
    } catch (const std::logic_error&) {
        throw PreconditionError("bad angle '" + text + "'");
    }
    if (!std::isfinite(value)) {
        throw PreconditionError("angle must be finite");
    }
    return value;
}

UnitarySpec parse_unitary_name(const std::string& text) {
    if (text == "I") {
        return UnitarySpec::identity();
    }
    if (text == "X" || text == "Z") {
        return text == "X" ? UnitarySpec::pauli_x(1) : UnitarySpec::pauli_z(1);
    }
    if (text == "F" || text == "H") {
        return UnitarySpec::fourier(false);
    }
    if (text == "Finv") {
        return UnitarySpec::fourier(true);
    }
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string head = text.substr(0, colon);
        std::string arg = text.substr(colon + 1);
        if (head == "X") {
            return UnitarySpec::pauli_x(parse_int("u", arg));
        }
        if (head == "Z") {
            return UnitarySpec::pauli_z(parse_int("u", arg));
        }
        if (head == "R") {
            return UnitarySpec::phase(parse_angle(arg));
        }
    }
    throw PreconditionError("unknown unitary '" + text + "'");
}

ConstructionReport build_scheme(const std::string& scheme, const Params& params) {
    ParamReader p(scheme, params);
    ConstructionReport report;
    if (scheme == "geometric" || scheme == "measured") {
        int d1 = p.integer("d1", 2), d2 = p.integer("d2", 2), da = p.integer("da", 2);
        int p1 = p.integer("p1", 1), p2 = p.integer("p2", 1);
        p.finish();
        report = scheme == "geometric" ? geometric_phase_circuit(d1, d2, da, p1, p2)
                                       : measured_phase_circuit(d1, d2, da, p1, p2);
    } else if (scheme == "batch") {
        int n = p.integer("N", 2), m = p.integer("M", 2);
        if (n < 1 || m < 1 || n > 12 || m > 12) {
            throw PreconditionError("batch: N and M must lie in 1..12");
        }
        int da = p.integer("da", 2);
        auto controls = p.list("controls", static_cast<std::size_t>(n), 1);
        auto targets = p.list("targets", static_cast<std::size_t>(m), 1);
        auto cdims = p.list("cdims", static_cast<std::size_t>(n), 2);
        auto tdims = p.list("tdims", static_cast<std::size_t>(m), 2);
        p.finish();
        if (controls.size() != static_cast<std::size_t>(n) || targets.size() != static_cast<std::size_t>(m)) {
            throw PreconditionError("batch: one power per control and per target required");
        }
        report = batch_rotation_circuit(controls, targets, da, cdims, tdims);
    } else if (scheme == "toffoli") {
        int n = p.integer("N", 2);
        int da = p.integer("da", n + 1);
        UnitarySpec u = p.unitary("u", "X");
        p.finish();
        report = toffoli_circuit(n, da, u);
    } else if (scheme == "adqc-entangle") {
        int d = p.integer("d", 2);
        std::string variant = p.text("variant", "finv");
        p.finish();
        if (variant != "finv" && variant != "f") {
            throw PreconditionError("adqc-entangle: variant must be finv or f");
        }
        report = adqc_entangle_circuit(d, variant == "finv" ? AdqcVariant::inverse_fourier_ancilla : AdqcVariant::fourier_both);
    } else if (scheme == "adqc-local") {
        double theta = p.angle("theta", 0.0);
        p.finish();
        report = adqc_local_circuit(theta);
    } else if (scheme == "swapcz" || scheme == "swapcz-local") {
        int d = p.integer("d", 2);
        std::optional<UnitarySpec> u;
        if (scheme == "swapcz-local") {
            u = p.unitary("u", "F");
        }
        double theta = p.angle("theta", 2.0 * std::numbers::pi / std::max(d, 1));
        p.finish();
        report = u ? swapcz_local_circuit(d, *u, theta) : swapcz_entangle_circuit(d, theta);
    } else if (scheme == "minimal") {
        int prep = p.integer("prep", 0);
        UnitarySpec u = p.unitary("u", "H");
        double theta = p.angle("theta", std::numbers::pi / 4);
        p.finish();
        report = minimal_control_circuit(prep, u, theta);
    } else {
        throw PreconditionError("unknown scheme '" + scheme + "'");
    }
    return report;
}

Outcome execute(const Command& command) {
    try {
        return std::visit(
            [](const auto& c) -> Outcome {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, RunCommand>) {
                    return do_run(c);
                } else if constexpr (std::is_same_v<T, UnitaryCommand>) {
                    return do_unitary(c);
                } else if constexpr (std::is_same_v<T, BuildCommand>) {
                    return do_build(c);
                } else if constexpr (std::is_same_v<T, VerifyCommand>) {
                    return do_verify(c);
                } else {
                    return do_counts(c);
                }
            },
            command);
    } catch (const ParseError& e) {
        return {kParseFailure, {}, std::string("parse error: ") + e.what() + "\n"};
    } catch (const SizeCapError& e) {
        return {kSizeCap, {}, std::string("size cap: ") + e.what() + "\n"};
    } catch (const std::invalid_argument& e) {
        return {kPrecondition, {}, std::string("precondition: ") + e.what() + "\n"};
    } catch (const std::length_error& e) {
        return {kSizeCap, {}, std::string("size cap: ") + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {kParseFailure, {}, std::string("error: ") + e.what() + "\n"};
    }
}

Outcome run_command_line(const std::vector<std::string>& args) {
    CLI::App app{"ancilla-mediated qudit gate constructions"};
    app.require_subcommand(1);

    RunCommand run_cmd;
    auto* run_app = app.add_subcommand("run", "Simulate a circuit file");
    run_app->add_option("file", run_cmd.file, "circuit document")->required();
    run_app->add_option("--seed", run_cmd.seed, "64-bit PRNG seed");
    run_app->add_option("--shots", run_cmd.shots, "independent shots");
    run_app->add_option("--top", run_cmd.top, "amplitudes shown per shot");

    UnitaryCommand unitary_cmd;
    auto* unitary_app = app.add_subcommand("unitary", "Print the dense unitary of a measurement-free circuit");
    unitary_app->add_option("file", unitary_cmd.file, "circuit document")->required();

    BuildCommand build_cmd;
    std::vector<std::string> build_params;
    bool no_verify = false;
    auto* build_app = app.add_subcommand("build", "Emit a named construction and its report");
    build_app->add_option("scheme", build_cmd.scheme)->required()->check(CLI::IsMember(kSchemes));
    build_app->add_option("params", build_params, "key=value parameters");
    build_app->add_option("--out", build_cmd.out, "report text path");
    build_app->add_option("--circuit", build_cmd.circuit_out, "circuit document path");
    build_app->add_option("--json", build_cmd.json_out, "JSON report path");
    build_app->add_option("--tol", build_cmd.tol, "fidelity tolerance");
    build_app->add_flag("--no-verify", no_verify, "skip the oracle");

    VerifyCommand verify_cmd;
    std::vector<std::string> verify_params;
    auto* verify_app = app.add_subcommand("verify", "Check a named construction against its target");
    verify_app->add_option("scheme", verify_cmd.scheme)->required()->check(CLI::IsMember(kSchemes));
    verify_app->add_option("params", verify_params, "key=value parameters");
    verify_app->add_option("--tol", verify_cmd.tol, "fidelity tolerance");

    CountsCommand counts_cmd;
    std::vector<std::string> counts_params;
    auto* counts_app = app.add_subcommand("counts", "Interaction totals against the pairwise baseline");
    counts_app->add_option("scheme", counts_cmd.scheme)->required()->check(CLI::IsMember(kSchemes));
    counts_app->add_option("params", counts_params, "key=value or key=lo..hi");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {kOk, app.help(), {}};
    } catch (const CLI::CallForAllHelp&) {
        return {kOk, app.help(), {}};
    } catch (const CLI::ParseError& e) {
        return {kPrecondition, {}, std::string("usage: ") + e.what() + "\n" + app.help()};
    }
    try {
        if (*run_app) {
            return execute(run_cmd);
        }
        if (*unitary_app) {
            return execute(unitary_cmd);
        }
        if (*build_app) {
            build_cmd.params = parse_params(build_params);
            build_cmd.verify = !no_verify;
            return execute(build_cmd);
        }
        if (*verify_app) {
            verify_cmd.params = parse_params(verify_params);
            return execute(verify_cmd);
        }
        counts_cmd.ranges = parse_params(counts_params);
        return execute(counts_cmd);
    } catch (const PreconditionError& e) {
        return {kPrecondition, {}, std::string("usage: ") + e.what() + "\n"};
    }
}

}  // namespace ancilla::cli
