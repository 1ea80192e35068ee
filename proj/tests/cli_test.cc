#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "ancilla/circuit_io.h"
#include "ancilla/constructions.h"
#include "ancilla/errors.h"
#include "ancilla/oracle.h"
#include "cli.h"
#include "generators.h"

namespace ancilla {
namespace {

namespace fs = std::filesystem;

const char* kBell = R"({
  "wires": [{"name": "a", "dim": 2}, {"name": "b", "dim": 2}],
  "ops": [{"gate": "F", "wire": "a"}, {"gate": "SUM", "control": "a", "target": "b"}]
})";

const char* kFeedforward = R"({
  "wires": [{"name": "r", "dim": 3}, {"name": "s", "dim": 3, "prep": {"basis": "conjugate", "label": 0}}],
  "records": ["m"],
  "ops": [
    {"gate": "CU", "control": "r", "target": "s", "u": {"kind": "X", "power": 1}},
    {"gate": "MEASURE", "wire": "s", "record": "m"},
    {"gate": "Z", "wire": "r", "power": {"a": 2, "m": "m", "b": 1}},
    {"gate": "R", "wire": "r", "theta": {"a": 0.5, "m": "m", "b": 0}}
  ]
})";

class TempDir {
  public:
    TempDir() : path_(fs::temp_directory_path() / ("ancilla-test-" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(ParseCircuit, BellFile) {
    Circuit c = parse_circuit_file(kBell);
    EXPECT_EQ(c.ops.size(), 2u);
    EXPECT_EQ(c.layout.wire_count(), 2u);
    EXPECT_TRUE(std::holds_alternative<ops::Sum>(c.ops[1].kind));
}

TEST(ParseCircuit, MeasureBeforeUseIsValid) {
    Circuit c = parse_circuit_file(kFeedforward);
    EXPECT_EQ(c.measurement_count(), 1u);
    EXPECT_EQ(c.preparation(1).basis, Preparation::Basis::conjugate);
    const auto& z = std::get<ops::PauliZ>(c.ops[2].kind);
    EXPECT_EQ(z.power.a, 2);
    EXPECT_EQ(z.power.record, "m");
    EXPECT_EQ(z.power.b, 1);
}

TEST(ParseCircuit, UseBeforeMeasureIsRejected) {
    const char* text = R"({"wires": [{"name": "a", "dim": 2}],
      "ops": [{"gate": "Z", "wire": "a", "power": {"a": 1, "m": "m", "b": 0}},
              {"gate": "MEASURE", "wire": "a", "record": "m"}]})";
    try {
        parse_circuit_file(text);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("m"), std::string::npos);
    }
}

TEST(ParseCircuit, Errors) {
    EXPECT_THROW(parse_circuit_file("{\"wires\": [}"), ParseError);
    try {
        parse_circuit_file("{\"wires\": [\n  {\"name\": \"a\" \"dim\": 2}]}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}], "ops": [{"gate": "Q", "wire": "a"}]})"),
                 ParseError);
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}, {"name": "a", "dim": 3}], "ops": []})"),
                 ParseError);
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}], "ops": [{"gate": "X", "wire": "b"}]})"),
                 ParseError);
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 1}], "ops": []})"), ParseError);
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}], "ops": [{"gate": "X", "wire": "a", "power": 0.5}]})"),
                 ParseError);
    EXPECT_THROW(
        parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}], "records": ["k"], "ops": []})"), ParseError);
    // Field names are case-sensitive.
    EXPECT_THROW(parse_circuit_file(R"({"Wires": [], "ops": []})"), ParseError);
    EXPECT_THROW(parse_circuit_file(R"({"wires": [{"name": "a", "dim": 2}], "ops": [{"gate": "x", "wire": "a"}]})"),
                 ParseError);
}

TEST(ParseCircuit, SizeCap) {
    std::string text = R"({"wires": [)";
    for (int k = 0; k < 25; ++k) {
        text += (k ? "," : "") + std::string(R"({"name": "w)") + std::to_string(k) + R"(", "dim": 2})";
    }
    text += R"(], "ops": []})";
    EXPECT_THROW(parse_circuit_file(text), SizeCapError);
}

TEST(RoundTrip, RandomCircuitsSameUnitary) {
    testing::Gen gen(404);
    for (int trial = 0; trial < 60; ++trial) {
        RegisterLayout l = gen.layout(3, 4);
        Circuit c = gen.circuit(l, gen.integer(0, 12));
        Circuit back = parse_circuit_file(serialize_circuit(c));
        EXPECT_EQ(back.layout, c.layout);
        EXPECT_LT(max_abs_diff(circuit_unitary(back), circuit_unitary(c)), 1e-12);
        EXPECT_EQ(serialize_circuit(back), serialize_circuit(c));
    }
}

TEST(RoundTrip, ConstructionsSameBranches) {
    std::vector<ConstructionReport> reps = {measured_phase_circuit(2, 3, 3, 1, 2), adqc_entangle_circuit(3),
                                            adqc_local_circuit(0.8), toffoli_circuit(2, 4, UnitarySpec::fourier()),
                                            minimal_control_circuit(1, UnitarySpec::phase(0.3), 0.9)};
    for (const ConstructionReport& rep : reps) {
        Circuit back = parse_circuit_file(serialize_circuit(rep.circuit));
        ConstructionReport copy = rep;
        copy.circuit = back;
        EXPECT_EQ(count_interactions(back, rep.ancilla_wires), rep.interaction_count);
        FidelityVerdict a = verify_construction(rep), b = verify_construction(copy);
        EXPECT_TRUE(b.pass) << rep.scheme;
        EXPECT_EQ(a.branch_count, b.branch_count);
        StateVector in = prepared_state(rep.circuit);
        auto ba = branch_enumerate(rep.circuit, in);
        auto bb = branch_enumerate(back, prepared_state(back));
        ASSERT_EQ(ba.size(), bb.size());
        for (std::size_t i = 0; i < ba.size(); ++i) {
            EXPECT_EQ(ba[i].outcomes, bb[i].outcomes);
            EXPECT_NEAR(ba[i].probability, bb[i].probability, 1e-12);
        }
    }
}

TEST(FormatReport, Lines) {
    ConstructionReport geo = geometric_phase_circuit(2, 2, 2, 1, 1);
    std::string text = format_report(geo);
    EXPECT_NE(text.find("interactions: 4\n"), std::string::npos);
    EXPECT_NE(text.find("fidelity: unverified\n"), std::string::npos);
    attach_verdict(geo);
    std::string verified = format_report(geo);
    EXPECT_NE(verified.find("fidelity: 1\n"), std::string::npos);
    EXPECT_EQ(verified, format_report(geo));
    ConstructionReport minimal = minimal_control_circuit(0, UnitarySpec::fourier(), std::numbers::pi / 4);
    EXPECT_NE(format_report(minimal).find("interactions: 2\n"), std::string::npos);
}

TEST(FormatReport, TwelveDigitFidelity) {
    ConstructionReport geo = geometric_phase_circuit(2, 2, 2, 1, 1);
    geo.verdict = FidelityVerdict{0.123456789012345, false, 1e-10};
    EXPECT_NE(format_report(geo).find("fidelity: 0.123456789012\n"), std::string::npos);
}

TEST(FormatMatrix, NineDigitsTabSeparated) {
    Matrix m(1, 3);
    m << Complex(1.0 / 3.0, -0.5), Complex(-0.0, 1e-15), Complex(2, 0);
    EXPECT_EQ(format_matrix(m), "0.333333333-0.5i\t0+0i\t2+0i\n");
}

TEST(SerializeReport, Fields) {
    ConstructionReport rep = measured_phase_circuit(2, 2, 2, 1, 1);
    std::string unverified = serialize_report(rep);
    EXPECT_NE(unverified.find("\"unverified\""), std::string::npos);
    attach_verdict(rep);
    std::string text = serialize_report(rep);
    for (const char* key : {"\"target\"", "\"counts\"", "\"corrections\"", "\"fidelity\"", "\"interactions\""}) {
        EXPECT_NE(text.find(key), std::string::npos) << key;
    }
}

using cli::run_command_line;

TEST(Cli, VerifyToffoli) {
    auto r = run_command_line({"verify", "toffoli", "N=2", "da=3", "u=X", "--tol", "1e-10"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("verdict: pass"), std::string::npos);
}

TEST(Cli, VerifyEveryScheme) {
    for (const std::string& s : cli::kSchemes) {
        auto r = run_command_line({"verify", s});
        EXPECT_EQ(r.code, 0) << s << ": " << r.err;
        auto b = run_command_line({"build", s});
        EXPECT_EQ(b.code, 0) << s << ": " << b.err;
    }
}

TEST(Cli, CountsBatch) {
    auto r = run_command_line({"counts", "batch", "N=2", "M=2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("interactions: 8; pairwise baseline: 16"), std::string::npos) << r.out;
    auto range = run_command_line({"counts", "toffoli", "N=1..3", "da=5"});
    EXPECT_EQ(range.code, 0) << range.err;
    EXPECT_NE(range.out.find("N=3 da=5: interactions: 7"), std::string::npos) << range.out;
}

TEST(Cli, UnitaryRefusesMeasurement) {
    TempDir dir;
    auto r = run_command_line({"unitary", dir.write("ff.json", kFeedforward)});
    EXPECT_EQ(r.code, 2);
    auto ok = run_command_line({"unitary", dir.write("bell.json", kBell)});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(ok.out.substr(0, ok.out.find('\n')), "0.707106781+0i\t0+0i\t0.707106781+0i\t0+0i");
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    EXPECT_EQ(run_command_line({"run", dir.write("bad.json", "{oops")}).code, 1);
    EXPECT_EQ(run_command_line({"run", dir.file("missing.json")}).code, 1);
    EXPECT_EQ(run_command_line({"verify", "toffoli", "N=3", "da=3"}).code, 2);
    EXPECT_EQ(run_command_line({"verify", "nonsense"}).code, 2);
    EXPECT_EQ(run_command_line({"verify", "toffoli", "bogus=1"}).code, 2);
    EXPECT_EQ(run_command_line({"verify", "geometric", "d1=1"}).code, 2);
    EXPECT_EQ(run_command_line({"verify", "geometric", "da=4", "--tol", "-1"}).code, 3);
    std::string big = R"({"wires": [{"name": "a", "dim": 4096}, {"name": "b", "dim": 2}], "ops": []})";
    EXPECT_EQ(run_command_line({"unitary", dir.write("big.json", big)}).code, 4);
    EXPECT_EQ(run_command_line({}).code, 2);
}

TEST(Cli, SeededRunIsReproducible) {
    TempDir dir;
    std::string file = dir.write("ff.json", kFeedforward);
    auto a = run_command_line({"run", file, "--seed", "12345678901234", "--shots", "5"});
    auto b = run_command_line({"run", file, "--seed", "12345678901234", "--shots", "5"});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("shot 4"), std::string::npos);
    EXPECT_NE(a.out.find("m="), std::string::npos);
}

TEST(Cli, BuildWritesFiles) {
    TempDir dir;
    auto r = run_command_line({"build", "measured", "da=3", "d1=3", "d2=3", "--out", dir.file("r.txt"),
                               "--circuit", dir.file("c.json"), "--json", dir.file("r.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir.file("r.txt")), r.out);
    Circuit c = parse_circuit_file(slurp(dir.file("c.json")));
    EXPECT_EQ(c.measurement_count(), 1u);
    EXPECT_NE(slurp(dir.file("r.json")).find("\"fidelity\""), std::string::npos);
    auto built = run_command_line({"run", dir.file("c.json"), "--seed", "3"});
    EXPECT_EQ(built.code, 0) << built.err;
    auto unverified = run_command_line({"build", "minimal", "--no-verify"});
    EXPECT_NE(unverified.out.find("fidelity: unverified"), std::string::npos);
}

TEST(Cli, AngleAndUnitaryParsing) {
    EXPECT_NEAR(cli::parse_angle("pi/4"), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(cli::parse_angle("-2pi/3"), -2 * std::numbers::pi / 3, 1e-15);
    EXPECT_NEAR(cli::parse_angle("1.234"), 1.234, 1e-15);
    EXPECT_THROW(cli::parse_angle("pie"), PreconditionError);
    EXPECT_THROW(cli::parse_angle("1.2.3"), PreconditionError);
    EXPECT_EQ(cli::parse_unitary_name("X:2").power, 2);
    EXPECT_EQ(cli::parse_unitary_name("R:pi").kind, UnitarySpec::Kind::phase);
    EXPECT_THROW(cli::parse_unitary_name("Q"), PreconditionError);
}

}  // namespace
}  // namespace ancilla
