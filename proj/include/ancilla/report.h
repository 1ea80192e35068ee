#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancilla/circuit.h"

namespace ancilla {

struct FidelityVerdict {
    double fidelity = 0.0;
    bool pass = false;
    double tolerance = 0.0;
    bool ancilla_disentangled = true;
    double min_ancilla_purity = 1.0;
    std::size_t branch_count = 1;
};

/// A feedforward correction: `op` depends affinely on the outcome `record`.
struct Correction {
    std::string record;
    GateOp op;
};

struct ConstructionReport {
    std::string scheme;
    std::string parameters;
    Circuit circuit;
    /// Target acts on these wires, in this order.
    std::vector<std::size_t> register_wires;
    std::vector<std::size_t> ancilla_wires;
    Matrix target;
    std::vector<Correction> corrections;
    int interaction_count = 0;
    std::optional<int> pairwise_baseline;
    std::optional<FidelityVerdict> verdict;
};

/// Stable line-oriented rendering; identical reports give identical text.
std::string format_report(const ConstructionReport& report);

/// "a+bi" with 9 significant digits, components below 1e-12 shown as 0.
std::string format_complex(Complex z);
/// Row-major, tab-separated entries, one row per line.
std::string format_matrix(const Matrix& m);

std::string format_power(const PowerExpr& e);
std::string format_theta(const ThetaExpr& e);
/// One-line rendering of an op using wire names, e.g. "CU a -> t u=X(1)".
std::string describe_op(const GateOp& op, const RegisterLayout& layout);

}  // namespace ancilla
