#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ancilla/qudit_algebra.h"

namespace ancilla {

inline constexpr std::uint64_t kDefaultAmplitudeCap = std::uint64_t{1} << 24;

struct Wire {
    std::string name;
    int dim;
};

/// Ordered wires of a register. Amplitude indices are mixed-radix numbers with
/// wire 0 most significant: index = sum_k q_k * prod_{j>k} d_j.
class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Wire> wires, std::uint64_t amplitude_cap = kDefaultAmplitudeCap);

    std::size_t wire_count() const { return wires_.size(); }
    const std::vector<Wire>& wires() const { return wires_; }
    const Wire& wire(std::size_t k) const { return wires_.at(k); }
    int dim(std::size_t k) const { return wires_.at(k).dim; }
    std::uint64_t stride(std::size_t k) const { return strides_.at(k); }
    std::uint64_t size() const { return size_; }

    std::optional<std::size_t> find(const std::string& name) const;
    /// Throws PreconditionError for unknown names.
    std::size_t index_of(const std::string& name) const;

    std::uint64_t amp_index(std::span<const int> labels) const;
    std::vector<int> unindex(std::uint64_t index) const;
    int label_of(std::uint64_t index, std::size_t k) const {
        return static_cast<int>((index / strides_[k]) % static_cast<std::uint64_t>(wires_[k].dim));
    }

    bool operator==(const RegisterLayout& other) const;

  private:
    std::vector<Wire> wires_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_ = 1;
};

/// a*m + b where m is a previously recorded outcome; `record` empty means the
/// expression is the constant b.
template <typename T>
struct Affine {
    T a{};
    std::string record;
    T b{};

    static Affine constant(T value) { return Affine{T{}, {}, value}; }
    static Affine of(T slope, std::string name, T offset = T{}) {
        return Affine{slope, std::move(name), offset};
    }
    bool depends_on_record() const { return !record.empty(); }
};

using PowerExpr = Affine<std::int64_t>;
using ThetaExpr = Affine<double>;

/// A single-wire unitary named by kind, or given explicitly. Realized against
/// the dimension of the wire it acts on.
struct UnitarySpec {
    enum class Kind { identity, x, z, fourier, fourier_inverse, phase, matrix };

    Kind kind = Kind::identity;
    std::int64_t power = 0;
    double theta = 0.0;
    Matrix explicit_matrix;

    static UnitarySpec identity() { return {}; }
    static UnitarySpec pauli_x(std::int64_t p) { return {Kind::x, p, 0.0, {}}; }
    static UnitarySpec pauli_z(std::int64_t p) { return {Kind::z, p, 0.0, {}}; }
    static UnitarySpec fourier(bool inverse = false) {
        return {inverse ? Kind::fourier_inverse : Kind::fourier, 0, 0.0, {}};
    }
    static UnitarySpec phase(double t) { return {Kind::phase, 0, t, {}}; }
    /// Throws PreconditionError if m is not square or not unitary (1e-8).
    static UnitarySpec matrix(Matrix m);

    Matrix realize(Dimension d) const;
    /// u^m for a control label m >= 0.
    Matrix power_of(Dimension d, int m) const;
    /// Whether this unitary can act on a wire of dimension d.
    bool fits(int d) const;
    std::string describe() const;
};

struct MeasureBasis {
    bool theta_basis = false;
    ThetaExpr theta;

    static MeasureBasis computational() { return {}; }
    static MeasureBasis theta_family(ThetaExpr t) { return {true, std::move(t)}; }
};

namespace ops {

struct PauliX {
    std::size_t wire;
    PowerExpr power;
};
struct PauliZ {
    std::size_t wire;
    PowerExpr power;
};
struct Fourier {
    std::size_t wire;
    bool inverse = false;
};
struct PhaseR {
    std::size_t wire;
    ThetaExpr theta;
};
struct LocalU {
    std::size_t wire;
    UnitarySpec u;
};
struct ControlledU {
    std::size_t control;
    std::size_t target;
    UnitarySpec u;
    bool zero_controlled = false;
};
struct Sum {
    std::size_t control;
    std::size_t target;
};
struct Swap {
    std::size_t a;
    std::size_t b;
};
struct Measure {
    std::size_t wire;
    MeasureBasis basis;
    std::string record;
};

}  // namespace ops

using OpKind = std::variant<ops::PauliX, ops::PauliZ, ops::Fourier, ops::PhaseR, ops::LocalU,
                            ops::ControlledU, ops::Sum, ops::Swap, ops::Measure>;

struct GateOp {
    OpKind kind;
    /// Ops sharing an id form one physical interaction.
    std::optional<int> interaction;

    bool is_measurement() const { return std::holds_alternative<ops::Measure>(kind); }
    /// Wires touched, in the op's own order (control before target).
    std::vector<std::size_t> wires() const;
};

/// Initial state of one wire: |label> or |+_label>.
struct Preparation {
    enum class Basis { computational, conjugate };
    Basis basis = Basis::computational;
    int label = 0;

    static Preparation basis_state(int q) { return {Basis::computational, q}; }
    static Preparation plus(int q = 0) { return {Basis::conjugate, q}; }
    Vector vector(Dimension d) const;
    bool operator==(const Preparation&) const = default;
};

struct Circuit {
    RegisterLayout layout;
    /// One per wire; empty means every wire starts in |0>.
    std::vector<Preparation> preparations;
    std::vector<GateOp> ops;
    std::vector<std::string> records;

    explicit Circuit(RegisterLayout l = {}) : layout(std::move(l)) {}

    Preparation preparation(std::size_t wire) const;
    void set_preparation(std::size_t wire, Preparation p);

    Circuit& add(OpKind kind, std::optional<int> interaction = std::nullopt) {
        ops.push_back(GateOp{std::move(kind), interaction});
        return *this;
    }

    std::size_t measurement_count() const;
    /// Checks wires, dimensions, expression dependencies and record rules;
    /// throws PreconditionError describing the first violation.
    void validate() const;
};

struct MeasurementRecord {
    std::string name;
    int outcome;
    bool operator==(const MeasurementRecord&) const = default;
};

/// Outcomes in the order they were recorded.
class RecordTable {
  public:
    void set(const std::string& name, int outcome);
    std::optional<int> find(const std::string& name) const;
    int get(const std::string& name) const;
    const std::vector<MeasurementRecord>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    bool operator==(const RecordTable&) const = default;

  private:
    std::vector<MeasurementRecord> entries_;
};

std::int64_t resolve(const PowerExpr& e, const RecordTable& records);
double resolve(const ThetaExpr& e, const RecordTable& records);

/// Number of two-wire ops touching any of `ancillas`, counting each
/// interaction group once.
int count_interactions(const Circuit& circuit, std::span<const std::size_t> ancillas);

}  // namespace ancilla
