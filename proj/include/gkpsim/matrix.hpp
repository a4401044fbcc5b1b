#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gkpsim {

using complex = std::complex<double>;

// Small dense complex matrix. Row-major storage; only the operations the
// simulator actually needs (products, adjoints, comparisons).
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<complex> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    complex& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const complex& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    CMat adjoint() const {
        CMat m(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CMat operator*(const CMat& o) const {
        if (cols != o.rows) throw std::invalid_argument("CMat: shape mismatch in product");
        CMat m(rows, o.cols);
        for (int r = 0; r < rows; ++r) {
            for (int k = 0; k < cols; ++k) {
                const complex v = (*this)(r, k);
                if (v == complex{}) continue;
                for (int c = 0; c < o.cols; ++c) m(r, c) += v * o(k, c);
            }
        }
        return m;
    }

    double max_abs_diff(const CMat& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("CMat: shape mismatch in diff");
        double m = 0.0;
        for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& v : a) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_unitary(double tol = 1e-12) const {
        if (rows != cols) return false;
        return (adjoint() * (*this)).max_abs_diff(identity(rows)) <= tol;
    }

    // Columns orthonormal (isometry test; rows >= cols).
    bool is_isometry(double tol = 1e-12) const {
        return (adjoint() * (*this)).max_abs_diff(identity(cols)) <= tol;
    }
};

// Rescale `m` by a unit phase so that its largest-magnitude entry is real
// positive. Used when comparing products that are only defined up to a
// global phase.
inline CMat phase_normalized(const CMat& m) {
    size_t best = 0;
    double mag = 0.0;
    for (size_t i = 0; i < m.a.size(); ++i) {
        if (std::abs(m.a[i]) > mag) {
            mag = std::abs(m.a[i]);
            best = i;
        }
    }
    CMat out = m;
    if (mag > 0.0) {
        complex ph = m.a[best] / mag;
        for (auto& v : out.a) v /= ph;
    }
    return out;
}

inline double max_abs_diff_up_to_phase(const CMat& x, const CMat& y) {
    return phase_normalized(x).max_abs_diff(phase_normalized(y));
}

}  // namespace gkpsim
