#pragma once

#include <string>
#include <string_view>

#include "ancilla/circuit.h"
#include "ancilla/report.h"

namespace ancilla {

/// Reads a JSON circuit document. Throws ParseError with a byte offset or a
/// field path on malformed input, unknown gate tags, unknown wires, dangling
/// records or duplicate wire names; SizeCapError if the register is too big.
Circuit parse_circuit_file(std::string_view text);

/// Inverse of parse_circuit_file; parse(serialize(c)) is operationally c.
std::string serialize_circuit(const Circuit& circuit);

/// JSON document with the scheme, target matrix, counts, corrections,
/// fidelity and the emitted circuit.
std::string serialize_report(const ConstructionReport& report);

}  // namespace ancilla
