#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkpsim/compiler.hpp"
#include "gkpsim/error_analysis.hpp"
#include "gkpsim/matrix.hpp"

namespace gkpsim {

enum class QuditGateKind { X, Z, P, F, CZ, Zphase };

struct QuditGate {
    QuditGateKind kind = QuditGateKind::P;
    int ell = 1;         // d = 2^ell
    double theta = 0.0;  // Zphase only
};

inline const char* qudit_gate_name(QuditGateKind k) {
    switch (k) {
        case QuditGateKind::X: return "X";
        case QuditGateKind::Z: return "Z";
        case QuditGateKind::P: return "P";
        case QuditGateKind::F: return "F";
        case QuditGateKind::CZ: return "CZ";
        case QuditGateKind::Zphase: return "Zphase";
    }
    return "?";
}

// Dense matrix from the defining formulas. P uses c_d = d mod 2.
inline CMat gate_matrix(const QuditGate& g) {
    if (g.ell < 1 || g.ell > 10) throw std::invalid_argument("gate_matrix: ell out of range");
    if (g.kind == QuditGateKind::CZ && g.ell > 5)
        throw std::invalid_argument("gate_matrix: CZ restricted to ell <= 5");
    const int d = 1 << g.ell;
    switch (g.kind) {
        case QuditGateKind::X: {
            CMat m(d, d);
            for (int x = 0; x < d; ++x) m((x + 1) % d, x) = 1.0;
            return m;
        }
        case QuditGateKind::Z: {
            CMat m(d, d);
            for (int x = 0; x < d; ++x) m(x, x) = std::polar(1.0, 2.0 * M_PI * x / d);
            return m;
        }
        case QuditGateKind::P: {
            const int cd = d % 2;
            CMat m(d, d);
            for (int x = 0; x < d; ++x)
                m(x, x) = std::polar(1.0, M_PI * x * (x + cd) / d);
            return m;
        }
        case QuditGateKind::F: {
            CMat m(d, d);
            const double s = 1.0 / std::sqrt(static_cast<double>(d));
            for (int y = 0; y < d; ++y)
                for (int x = 0; x < d; ++x)
                    m(y, x) = s * std::polar(1.0, 2.0 * M_PI * x * y / d);
            return m;
        }
        case QuditGateKind::CZ: {
            CMat m(d * d, d * d);
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y)
                    m(x * d + y, x * d + y) = std::polar(1.0, 2.0 * M_PI * x * y / d);
            return m;
        }
        case QuditGateKind::Zphase: {
            CMat m(d, d);
            for (int x = 0; x < d; ++x) m(x, x) = std::polar(1.0, g.theta * x);
            return m;
        }
    }
    throw std::logic_error("gate_matrix: unreachable");
}

// One factor of a two-qubit decomposition. Qubit indices refer to the bit
// position in the encoded integer (A_j is bit j); for bipartite factors the
// first wire is on system A and the second on system B.
struct Factor {
    bool two_qubit = false;
    int a = 0;
    int b = -1;
    char system_a = 'A';
    char system_b = 'A';
    Mat4 matrix{};  // 2x2 in the first 4 entries when single-qubit

    static Factor single(int j, const Mat2& u, char sys = 'A') {
        Factor f;
        f.two_qubit = false;
        f.a = j;
        f.system_a = f.system_b = sys;
        for (int i = 0; i < 4; ++i) f.matrix[i] = u[i];
        return f;
    }
    static Factor pair(int a, int b, const Mat4& u, char sys_a = 'A', char sys_b = 'A') {
        Factor f;
        f.two_qubit = true;
        f.a = a;
        f.b = b;
        f.system_a = sys_a;
        f.system_b = sys_b;
        f.matrix = u;
        return f;
    }
};

struct TwoQubitFactorization {
    std::vector<Factor> factors;
    int T = 0;  // factor count
    bool bipartite = false;
};

namespace detail {

inline Mat2 rotation(double angle) {
    return Mat2{1.0, 0.0, 0.0, std::polar(1.0, angle)};
}

// diag(1,1,1,e^{i theta}) in the |q_a q_b> basis.
inline Mat4 controlled_phase(double theta) {
    Mat4 m{};
    m[0] = m[5] = m[10] = 1.0;
    m[15] = std::polar(1.0, theta);
    return m;
}

inline Mat4 swap_gate() {
    Mat4 m{};
    m[0] = m[6] = m[9] = m[15] = 1.0;
    return m;
}

}  // namespace detail

// Corollary 4.4 decompositions into one-/two-qubit factors on the encoded
// bits. Diagonal j = k terms of P collapse to single-qubit phases since
// x_j^2 = x_j.
inline TwoQubitFactorization decompose(const QuditGate& g, int ell) {
    if (ell < 1) throw std::invalid_argument("decompose: ell must be >= 1");
    const double d = std::pow(2.0, ell);
    TwoQubitFactorization out;
    switch (g.kind) {
        case QuditGateKind::Zphase: {
            for (int j = 0; j < ell; ++j)
                out.factors.push_back(Factor::single(j, detail::rotation(g.theta * std::pow(2.0, j))));
            break;
        }
        case QuditGateKind::P: {
            if ((1 << ell) % 2 != 0) throw std::invalid_argument("decompose: P needs even d");
            for (int j = 0; j < ell; ++j) {
                for (int k = 0; k < ell; ++k) {
                    const double theta = 2.0 * M_PI * std::pow(2.0, j + k) / d;
                    if (j == k)
                        out.factors.push_back(Factor::single(j, detail::rotation(theta)));
                    else
                        out.factors.push_back(
                            Factor::pair(std::min(j, k), std::max(j, k), detail::controlled_phase(theta)));
                }
            }
            break;
        }
        case QuditGateKind::CZ: {
            out.bipartite = true;
            for (int j = 0; j < ell; ++j)
                for (int k = 0; k < ell; ++k) {
                    const double theta = 2.0 * M_PI * std::pow(2.0, j + k) / d;
                    out.factors.push_back(Factor::pair(j, k, detail::controlled_phase(theta), 'A', 'B'));
                }
            break;
        }
        case QuditGateKind::F: {
            // standard QFT: Hadamard-then-controlled-rotation layers from the
            // most significant bit down, then a swap layer. Swaps count as
            // two-qubit factors.
            const double s = 1.0 / std::sqrt(2.0);
            const Mat2 h{s, s, s, -s};
            for (int i = ell - 1; i >= 0; --i) {
                out.factors.push_back(Factor::single(i, h));
                for (int m = i - 1; m >= 0; --m) {
                    const double theta = 2.0 * M_PI / std::pow(2.0, i - m + 1);
                    out.factors.push_back(
                        Factor::pair(std::min(i, m), std::max(i, m), detail::controlled_phase(theta)));
                }
            }
            for (int i = 0; i < ell / 2; ++i)
                out.factors.push_back(Factor::pair(i, ell - 1 - i, detail::swap_gate()));
            break;
        }
        default:
            throw std::invalid_argument("decompose: unsupported gate (X/Z are plain displacements)");
    }
    out.T = static_cast<int>(out.factors.size());
    return out;
}

// Dense product of the factors on the integer-indexed qubit space: bit j of
// the column index is logical bit A_j (for bipartite, index x*2^ell + y and
// B_k is bit k of y). Equals the J-conjugated qudit matrix when the
// decomposition is correct.
inline CMat factor_product(const TwoQubitFactorization& f, int ell) {
    const int n_bits = f.bipartite ? 2 * ell : ell;
    const int dim = 1 << n_bits;
    auto bit_of = [&](const Factor& fact, bool second) {
        const int j = second ? fact.b : fact.a;
        const char sys = second ? fact.system_b : fact.system_a;
        return (f.bipartite && sys == 'A') ? ell + j : j;
    };
    CMat m = CMat::identity(dim);
    for (const auto& fact : f.factors) {
        CMat next(dim, dim);
        const int ba = bit_of(fact, false);
        const int bb = fact.two_qubit ? bit_of(fact, true) : -1;
        for (int col = 0; col < dim; ++col) {
            for (int row = 0; row < dim; ++row) {
                const complex v = m(row, col);
                if (v == complex{}) continue;
                if (!fact.two_qubit) {
                    const int in = (row >> ba) & 1;
                    for (int o = 0; o < 2; ++o) {
                        const complex amp = fact.matrix[o * 2 + in];
                        if (amp == complex{}) continue;
                        const int nrow = (row & ~(1 << ba)) | (o << ba);
                        next(nrow, col) += amp * v;
                    }
                } else {
                    const int in = ((row >> ba) & 1) * 2 + ((row >> bb) & 1);
                    for (int o = 0; o < 4; ++o) {
                        const complex amp = fact.matrix[o * 4 + in];
                        if (amp == complex{}) continue;
                        const int nrow =
                            (row & ~(1 << ba) & ~(1 << bb)) | (((o >> 1) & 1) << ba) | ((o & 1) << bb);
                        next(nrow, col) += amp * v;
                    }
                }
            }
        }
        m = std::move(next);
    }
    return m;
}

struct CliffordReport {
    QuditGate gate;
    int ell = 0;
    double kappa = 0.0;
    TwoQubitFactorization decomposition;
    ElementaryCircuit circuit;
    double composed_bound = 0.0;  // T * 400 l kappa
    double decomposition_deviation = 0.0;  // vs J-conjugated dense target, up to phase
};

// Lower every factor through the bit-transfer compiler and compose the
// per-factor Theorem-4.3 bound.
inline CliffordReport compile_and_bound(const QuditGate& g, int ell, double kappa) {
    if (ell < 1) throw std::invalid_argument("compile_and_bound: ell must be >= 1");
    CliffordReport rep;
    rep.gate = g;
    rep.ell = ell;
    rep.kappa = kappa;
    rep.decomposition = decompose(g, ell);
    const bool bip = rep.decomposition.bipartite;
    rep.circuit.n_modes = bip ? 3 : 2;
    rep.circuit.n_qubits = 3;
    rep.circuit.resource_map = bip ? std::map<std::string, int>{{"S1", 0}, {"S2", 1}, {"B", 2},
                                                                {"Q1", 0}, {"Q2", 1}, {"Q", 2}}
                                   : std::map<std::string, int>{{"S", 0}, {"B", 1},
                                                                {"Q1", 0}, {"Q2", 1}, {"Q", 2}};
    for (const auto& f : rep.decomposition.factors) {
        ElementaryCircuit fc;
        if (!f.two_qubit) {
            Mat2 u;
            for (int i = 0; i < 4; ++i) u[i] = f.matrix[i];
            // single-qubit factors go through one bit-transfer pair
            if (bip) throw std::logic_error("compile_and_bound: bipartite single factor");
            fc = lower_single_qubit(ell, f.a, u);
        } else if (bip) {
            fc = lower_two_qubit_bipartite(ell, f.a, f.b, f.matrix);
        } else {
            if (ell < 2) throw std::logic_error("compile_and_bound: two-qubit factor at ell=1");
            fc = lower_two_qubit(ell, f.a, f.b, f.matrix);
        }
        rep.circuit.gates.insert(rep.circuit.gates.end(), fc.gates.begin(), fc.gates.end());
        rep.circuit.logical_map_count += fc.logical_map_count;
        rep.circuit.bounded_form_count += fc.bounded_form_count;
    }
    std::vector<double> steps(rep.decomposition.T, 400.0 * ell * kappa);
    rep.composed_bound = compose_bounds(steps);
    const CMat target = gate_matrix({g.kind, ell, g.theta});
    rep.decomposition_deviation =
        max_abs_diff_up_to_phase(factor_product(rep.decomposition, ell), target);
    return rep;
}

inline nlohmann::ordered_json to_json(const TwoQubitFactorization& f) {
    nlohmann::ordered_json o;
    o["schema"] = 1;
    o["T"] = f.T;
    o["bipartite"] = f.bipartite;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& fact : f.factors) {
        nlohmann::ordered_json fo;
        fo["two_qubit"] = fact.two_qubit;
        fo["wires"] = fact.two_qubit
                          ? nlohmann::ordered_json::array(
                                {std::string(1, fact.system_a) + std::to_string(fact.a),
                                 std::string(1, fact.system_b) + std::to_string(fact.b)})
                          : nlohmann::ordered_json::array(
                                {std::string(1, fact.system_a) + std::to_string(fact.a)});
        const int n = fact.two_qubit ? 4 : 2;
        nlohmann::ordered_json m = nlohmann::ordered_json::array();
        for (int i = 0; i < n * n; ++i)
            m.push_back({fact.matrix[i].real(), fact.matrix[i].imag()});
        fo["matrix"] = m;
        arr.push_back(fo);
    }
    o["factors"] = arr;
    return o;
}

}  // namespace gkpsim
