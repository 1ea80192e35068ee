#include "ancilla/qudit_algebra.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ancilla/errors.h"

namespace ancilla {

Dimension::Dimension(int d) : d_(d) {
    if (d < 2) {
        throw InvalidDimensionError("dimension must be >= 2, got " + std::to_string(d));
    }
}

int mod_label(std::int64_t q, int d) {
    std::int64_t r = q % d;
    if (r < 0) {
        r += d;
    }
    return static_cast<int>(r);
}

double unitarity_deviation(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        return std::numeric_limits<double>::infinity();
    }
    Matrix g = m.adjoint() * m;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& m, double tol) {
    return unitarity_deviation(m) <= tol;
}

Complex omega(Dimension d) {
    return omega_power(d, 1);
}

Complex omega_power(Dimension d, std::int64_t k) {
    int r = mod_label(k, d);
    return std::polar(1.0, 2.0 * std::numbers::pi * r / d.value());
}

Matrix identity_matrix(Dimension d) {
    return Matrix::Identity(d, d);
}

Matrix pauli_matrix(PauliKind kind, Dimension d, std::int64_t power) {
    Matrix m = Matrix::Zero(d, d);
    int p = mod_label(power, d);
    for (int q = 0; q < d; ++q) {
        if (kind == PauliKind::x) {
            m((q + p) % d, q) = 1.0;
        } else {
            m(q, q) = omega_power(d, static_cast<std::int64_t>(q) * p);
        }
    }
    return m;
}

Matrix fourier_matrix(Dimension d, bool inverse) {
    Matrix f(d.value(), d.value());
    double scale = 1.0 / std::sqrt(static_cast<double>(d.value()));
    for (int row = 0; row < d; ++row) {
        for (int col = 0; col < d; ++col) {
            std::int64_t k = static_cast<std::int64_t>(row) * col;
            f(row, col) = omega_power(d, inverse ? -k : k) * scale;
        }
    }
    return f;
}

Matrix phase_matrix(Dimension d, double theta) {
    if (!std::isfinite(theta)) {
        throw PreconditionError("phase angle must be finite");
    }
    Matrix m = Matrix::Zero(d, d);
    for (int q = 0; q < d; ++q) {
        m(q, q) = std::polar(1.0, theta * q);
    }
    return m;
}

Vector conjugate_state(Dimension d, int q) {
    if (q < 0 || q >= d) {
        throw PreconditionError("basis label " + std::to_string(q) + " out of range for d=" +
                                std::to_string(d.value()));
    }
    return fourier_matrix(d).col(q);
}

namespace {

void require_unitary(const Matrix& u, const char* what) {
    if (!is_unitary(u)) {
        throw PreconditionError(std::string(what) + ": matrix is not unitary");
    }
}

}  // namespace

Matrix controlled_matrix(Dimension d_control, const Matrix& u) {
    require_unitary(u, "controlled_matrix");
    const Eigen::Index n = u.rows();
    Matrix out = Matrix::Zero(d_control * n, d_control * n);
    Matrix block = Matrix::Identity(n, n);
    for (int m = 0; m < d_control; ++m) {
        out.block(m * n, m * n, n, n) = block;
        block = u * block;
    }
    return out;
}

Matrix zero_controlled_matrix(Dimension d_control, const Matrix& u) {
    require_unitary(u, "zero_controlled_matrix");
    const Eigen::Index n = u.rows();
    Matrix out = Matrix::Identity(d_control * n, d_control * n);
    out.block(0, 0, n, n) = u;
    return out;
}

Matrix sum_matrix(Dimension d) {
    return controlled_matrix(d, pauli_matrix(PauliKind::x, d, 1));
}

Matrix swap_matrix(Dimension d) {
    const int n = d.value();
    Matrix out = Matrix::Zero(n * n, n * n);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            out(k * n + m, m * n + k) = 1.0;
        }
    }
    return out;
}

Matrix controlled_phase_matrix(Dimension d1, Dimension d2, double theta) {
    if (!std::isfinite(theta)) {
        throw PreconditionError("phase angle must be finite");
    }
    Matrix out = Matrix::Zero(d1 * d2, d1 * d2);
    for (int a = 0; a < d1; ++a) {
        for (int b = 0; b < d2; ++b) {
            out(a * d2 + b, a * d2 + b) = std::polar(1.0, theta * a * b);
        }
    }
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix matrix_power(const Matrix& u, int m) {
    Matrix out = Matrix::Identity(u.rows(), u.cols());
    for (int k = 0; k < m; ++k) {
        out = u * out;
    }
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ancilla
