#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ancilla/report.h"

namespace ancilla::cli {

enum ExitCode : int {
    kOk = 0,
    kParseFailure = 1,
    kPrecondition = 2,
    kVerificationFailure = 3,
    kSizeCap = 4,
};

/// key=value scheme parameters, e.g. {"N": "2", "da": "3", "u": "X"}.
using Params = std::map<std::string, std::string>;

struct RunCommand {
    std::string file;
    std::uint64_t seed = 0;
    int shots = 1;
    int top = 4;
};
struct UnitaryCommand {
    std::string file;
};
struct BuildCommand {
    std::string scheme;
    Params params;
    std::string out;          // report text path, empty for none
    std::string circuit_out;  // circuit document path
    std::string json_out;     // JSON report path
    bool verify = true;
    double tol = 1e-10;
};
struct VerifyCommand {
    std::string scheme;
    Params params;
    double tol = 1e-10;
};
/// Values may be ranges "lo..hi"; every combination is built.
struct CountsCommand {
    std::string scheme;
    Params ranges;
};
using Command = std::variant<RunCommand, UnitaryCommand, BuildCommand, VerifyCommand, CountsCommand>;

struct Outcome {
    int code = kOk;
    std::string out;
    std::string err;
};

extern const std::vector<std::string> kSchemes;

/// Builds a named construction from its parameters. Unknown keys, bad
/// values and unknown schemes throw PreconditionError.
ConstructionReport build_scheme(const std::string& scheme, const Params& params);

/// Parses "1.5", "pi", "-pi/4", "2pi/3", "0.25pi".
double parse_angle(const std::string& text);

/// I, X, Z, F, Finv, H, X:<p>, Z:<p>, R:<theta>.
UnitarySpec parse_unitary_name(const std::string& text);

Outcome execute(const Command& command);

/// Full command line (without the program name) to outcome.
Outcome run_command_line(const std::vector<std::string>& args);

}  // namespace ancilla::cli
