#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace ancilla {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dimension of a single wire. Always >= 2; construction from a smaller
/// integer throws InvalidDimensionError.
class Dimension {
  public:
    Dimension(int d);  // NOLINT(google-explicit-constructor): validating wrapper
    int value() const { return d_; }
    operator int() const { return d_; }  // NOLINT

  private:
    int d_;
};

enum class PauliKind { x, z };

/// Reduces q into [0, d).
int mod_label(std::int64_t q, int d);

/// Tolerance used when validating caller-supplied unitaries.
inline constexpr double kInputUnitaryTolerance = 1e-8;

/// Largest entry of |M^dag M - I|; returns +inf for non-square input.
double unitarity_deviation(const Matrix& m);
bool is_unitary(const Matrix& m, double tol = kInputUnitaryTolerance);

Complex omega(Dimension d);
/// omega^k computed from the reduced exponent k mod d.
Complex omega_power(Dimension d, std::int64_t k);

Matrix identity_matrix(Dimension d);

/// X(q')|q> = |q+q'>, Z(q')|q> = omega^{qq'}|q>.
Matrix pauli_matrix(PauliKind kind, Dimension d, std::int64_t power);

/// F[q', q] = omega^{q q'} / sqrt(d); `inverse` gives the adjoint.
Matrix fourier_matrix(Dimension d, bool inverse = false);

/// R(theta)|q> = e^{i theta q}|q>. Throws for non-finite theta.
Matrix phase_matrix(Dimension d, double theta);

/// |+_q> = F|q>.
Vector conjugate_state(Dimension d, int q);

/// Block diagonal diag(u^0, u^1, ..., u^{d_control-1}): |m>|n> -> |m> u^m |n>.
Matrix controlled_matrix(Dimension d_control, const Matrix& u);

/// Applies u to the target only in the control-0 block.
Matrix zero_controlled_matrix(Dimension d_control, const Matrix& u);

/// |m>|n> -> |m>|m+n mod d>.
Matrix sum_matrix(Dimension d);

/// |m>|n> -> |n>|m>.
Matrix swap_matrix(Dimension d);

/// Diagonal CR(theta)|q1>|q2> = e^{i theta q1 q2}|q1>|q2>.
Matrix controlled_phase_matrix(Dimension d1, Dimension d2, double theta);

/// Kronecker product a (x) b with a's index most significant.
Matrix kron(const Matrix& a, const Matrix& b);

/// u^m by repeated multiplication, m >= 0.
Matrix matrix_power(const Matrix& u, int m);

/// Largest entrywise |a - b|; +inf on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace ancilla
