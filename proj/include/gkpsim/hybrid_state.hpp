#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gkpsim/gkp_states.hpp"
#include "gkpsim/wavepacket.hpp"

namespace gkpsim {

using Mat2 = std::array<complex, 4>;    // row-major 2x2
using Mat4 = std::array<complex, 16>;   // row-major 4x4

inline bool is_unitary2(const Mat2& u, double tol = 1e-12) {
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            complex s{};
            for (int k = 0; k < 2; ++k) s += std::conj(u[k * 2 + r]) * u[k * 2 + c];
            if (std::abs(s - (r == c ? 1.0 : 0.0)) > tol) return false;
        }
    return true;
}

inline bool is_unitary4(const Mat4& u, double tol = 1e-12) {
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            complex s{};
            for (int k = 0; k < 4; ++k) s += std::conj(u[k * 4 + r]) * u[k * 4 + c];
            if (std::abs(s - (r == c ? 1.0 : 0.0)) > tol) return false;
        }
    return true;
}

// Elementary physical gate from the bounded-strength set: displacements
// e^{itQ}, e^{-itP}, squeezings M_beta, their qubit-controlled versions, and
// one-/two-qubit unitaries.
struct ElementaryGate {
    enum class Kind { disp_q, disp_p, squeeze, ctrl_disp_q, ctrl_disp_p, one_qubit, two_qubit };

    Kind kind = Kind::disp_q;
    int mode = -1;
    int qubit = -1;
    int qubit2 = -1;
    double param = 0.0;  // t for displacements, beta for squeezings
    Mat4 matrix{};       // 2x2 in the first 4 entries for one_qubit

    static ElementaryGate DispQ(int mode, double t) { return {Kind::disp_q, mode, -1, -1, t, {}}; }
    static ElementaryGate DispP(int mode, double t) { return {Kind::disp_p, mode, -1, -1, t, {}}; }
    static ElementaryGate Squeeze(int mode, double beta) {
        if (!(beta > 0.0)) throw std::invalid_argument("Squeeze: beta must be > 0");
        return {Kind::squeeze, mode, -1, -1, beta, {}};
    }
    static ElementaryGate CtrlDispQ(int qubit, int mode, double t) {
        return {Kind::ctrl_disp_q, mode, qubit, -1, t, {}};
    }
    static ElementaryGate CtrlDispP(int qubit, int mode, double t) {
        return {Kind::ctrl_disp_p, mode, qubit, -1, t, {}};
    }
    static ElementaryGate OneQubit(int qubit, const Mat2& u) {
        if (!is_unitary2(u)) throw std::invalid_argument("OneQubit: matrix not unitary");
        ElementaryGate g{Kind::one_qubit, -1, qubit, -1, 0.0, {}};
        for (int i = 0; i < 4; ++i) g.matrix[i] = u[i];
        return g;
    }
    static ElementaryGate TwoQubit(int qubit_a, int qubit_b, const Mat4& u) {
        if (qubit_a == qubit_b) throw std::invalid_argument("TwoQubit: distinct qubits required");
        if (!is_unitary4(u)) throw std::invalid_argument("TwoQubit: matrix not unitary");
        ElementaryGate g{Kind::two_qubit, -1, qubit_a, qubit_b, 0.0, {}};
        g.matrix = u;
        return g;
    }

    // |t| for displacements, max(beta, 1/beta) for squeezings, 1 otherwise.
    double strength() const {
        switch (kind) {
            case Kind::disp_q:
            case Kind::disp_p:
            case Kind::ctrl_disp_q:
            case Kind::ctrl_disp_p:
                return std::abs(param);
            case Kind::squeeze:
                return std::max(param, 1.0 / param);
            default:
                return 1.0;
        }
    }

    ElementaryGate inverse() const {
        ElementaryGate g = *this;
        switch (kind) {
            case Kind::disp_q:
            case Kind::disp_p:
            case Kind::ctrl_disp_q:
            case Kind::ctrl_disp_p:
                g.param = -param;
                break;
            case Kind::squeeze:
                g.param = 1.0 / param;
                break;
            case Kind::one_qubit:
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) g.matrix[r * 2 + c] = std::conj(matrix[c * 2 + r]);
                break;
            case Kind::two_qubit:
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) g.matrix[r * 4 + c] = std::conj(matrix[c * 4 + r]);
                break;
        }
        return g;
    }
};

inline std::vector<ElementaryGate> inverted(const std::vector<ElementaryGate>& gates) {
    std::vector<ElementaryGate> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.push_back(it->inverse());
    return out;
}

// One product term: coeff * (packet on mode 0) x ... x |qubit bits>.
// Bit a of `qubits` is qubit a.
struct HybridTerm {
    complex coeff{1.0, 0.0};
    std::vector<Wavepacket> modes;
    uint32_t qubits = 0;
};

// Finite superposition of product terms for n oscillators and m qubits.
struct HybridState {
    int n_modes = 0;
    int n_qubits = 0;
    std::vector<HybridTerm> terms;

    static HybridState product(const std::vector<ModeState>& modes, uint32_t qubits,
                               int n_qubits) {
        HybridState s;
        s.n_modes = static_cast<int>(modes.size());
        s.n_qubits = n_qubits;
        if (n_qubits < 32 && qubits >= (1u << n_qubits))
            throw std::invalid_argument("HybridState::product: qubit string out of range");
        std::vector<size_t> idx(modes.size(), 0);
        // cartesian product over the packet lists
        while (true) {
            HybridTerm t;
            t.coeff = 1.0;
            t.qubits = qubits;
            t.modes.reserve(modes.size());
            for (size_t m = 0; m < modes.size(); ++m) t.modes.push_back(modes[m].packets[idx[m]]);
            s.terms.push_back(std::move(t));
            size_t m = 0;
            for (; m < modes.size(); ++m) {
                if (++idx[m] < modes[m].packets.size()) break;
                idx[m] = 0;
            }
            if (m == modes.size()) break;
        }
        return s;
    }
};

namespace detail {

struct TermOrder {
    bool operator()(const HybridTerm& a, const HybridTerm& b) const {
        if (a.qubits != b.qubits) return a.qubits < b.qubits;
        for (size_t m = 0; m < a.modes.size(); ++m) {
            const auto& x = a.modes[m];
            const auto& y = b.modes[m];
            if (x.center != y.center) return x.center < y.center;
            if (x.phase_slope != y.phase_slope) return x.phase_slope < y.phase_slope;
            if (x.width != y.width) return x.width < y.width;
            if (x.lo != y.lo) return x.lo < y.lo;
            if (x.hi != y.hi) return x.hi < y.hi;
            if (x.amplitude.real() != y.amplitude.real())
                return x.amplitude.real() < y.amplitude.real();
            if (x.amplitude.imag() != y.amplitude.imag())
                return x.amplitude.imag() < y.amplitude.imag();
        }
        return false;
    }
};

inline bool packets_identical(const HybridTerm& a, const HybridTerm& b) {
    if (a.qubits != b.qubits) return false;
    for (size_t m = 0; m < a.modes.size(); ++m)
        if (!approx_equal(a.modes[m], b.modes[m])) return false;
    return true;
}

}  // namespace detail

// Sum coefficients of packet-identical terms, drop zero terms. The state is
// unchanged as a function.
inline HybridState merge_terms(const HybridState& s) {
    HybridState out;
    out.n_modes = s.n_modes;
    out.n_qubits = s.n_qubits;
    if (s.terms.empty()) return out;
    std::vector<HybridTerm> sorted = s.terms;
    std::sort(sorted.begin(), sorted.end(), detail::TermOrder{});
    out.terms.reserve(sorted.size());
    for (auto& t : sorted) {
        if (!out.terms.empty() && detail::packets_identical(out.terms.back(), t))
            out.terms.back().coeff += t.coeff;
        else
            out.terms.push_back(std::move(t));
    }
    double max_c = 0.0;
    for (const auto& t : out.terms) max_c = std::max(max_c, std::abs(t.coeff));
    std::erase_if(out.terms,
                  [max_c](const HybridTerm& t) { return std::abs(t.coeff) <= 1e-15 * max_c; });
    return out;
}

inline HybridState apply_gate(const HybridState& s, const ElementaryGate& g) {
    using Kind = ElementaryGate::Kind;
    auto check_mode = [&](int m) {
        if (m < 0 || m >= s.n_modes) throw std::out_of_range("apply_gate: mode index out of range");
    };
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= s.n_qubits) throw std::out_of_range("apply_gate: qubit index out of range");
    };
    HybridState out;
    out.n_modes = s.n_modes;
    out.n_qubits = s.n_qubits;
    switch (g.kind) {
        case Kind::disp_q:
        case Kind::disp_p:
        case Kind::squeeze:
        case Kind::ctrl_disp_q:
        case Kind::ctrl_disp_p: {
            check_mode(g.mode);
            const bool ctrl = (g.kind == Kind::ctrl_disp_q || g.kind == Kind::ctrl_disp_p);
            if (ctrl) check_qubit(g.qubit);
            out.terms = s.terms;
            for (auto& t : out.terms) {
                if (ctrl && ((t.qubits >> g.qubit) & 1u) == 0u) continue;
                Wavepacket& w = t.modes[g.mode];
                if (g.kind == Kind::disp_p || g.kind == Kind::ctrl_disp_p)
                    w = translate(w, g.param);
                else if (g.kind == Kind::disp_q || g.kind == Kind::ctrl_disp_q)
                    w = phase_mul(w, g.param);
                else
                    w = dilate(w, g.param);
            }
            return out;
        }
        case Kind::one_qubit: {
            check_qubit(g.qubit);
            out.terms.reserve(2 * s.terms.size());
            for (const auto& t : s.terms) {
                const uint32_t b = (t.qubits >> g.qubit) & 1u;
                for (uint32_t bp = 0; bp < 2; ++bp) {
                    const complex amp = g.matrix[bp * 2 + b];
                    if (amp == complex{}) continue;
                    HybridTerm nt = t;
                    nt.coeff *= amp;
                    nt.qubits = (t.qubits & ~(1u << g.qubit)) | (bp << g.qubit);
                    out.terms.push_back(std::move(nt));
                }
            }
            return merge_terms(out);
        }
        case Kind::two_qubit: {
            check_qubit(g.qubit);
            check_qubit(g.qubit2);
            out.terms.reserve(4 * s.terms.size());
            for (const auto& t : s.terms) {
                const uint32_t ba = (t.qubits >> g.qubit) & 1u;
                const uint32_t bb = (t.qubits >> g.qubit2) & 1u;
                const uint32_t in = ba * 2 + bb;
                for (uint32_t o = 0; o < 4; ++o) {
                    const complex amp = g.matrix[o * 4 + in];
                    if (amp == complex{}) continue;
                    HybridTerm nt = t;
                    nt.coeff *= amp;
                    uint32_t q = t.qubits & ~(1u << g.qubit) & ~(1u << g.qubit2);
                    q |= ((o >> 1) & 1u) << g.qubit;
                    q |= (o & 1u) << g.qubit2;
                    nt.qubits = q;
                    out.terms.push_back(std::move(nt));
                }
            }
            return merge_terms(out);
        }
    }
    throw std::logic_error("apply_gate: unreachable");
}

struct RunStats {
    size_t peak_terms = 0;
};

inline HybridState run_circuit(const HybridState& s, const std::vector<ElementaryGate>& gates,
                               RunStats* stats = nullptr) {
    HybridState cur = s;
    size_t peak = cur.terms.size();
    for (const auto& g : gates) {
        cur = apply_gate(cur, g);
        peak = std::max(peak, cur.terms.size());
    }
    if (stats) stats->peak_terms = peak;
    return cur;
}

// <a, b> = sum over term pairs with equal qubit strings of
// conj(ca) cb prod_m <wa_m, wb_m>. Terms are bucketed by qubit string and,
// within a bucket, pruned by mode-0 support so disjoint pairs cost nothing.
inline complex inner_product(const HybridState& a, const HybridState& b) {
    if (a.n_modes != b.n_modes || a.n_qubits != b.n_qubits)
        throw std::invalid_argument("inner_product: shape mismatch");
    std::vector<const HybridTerm*> ta, tb;
    ta.reserve(a.terms.size());
    tb.reserve(b.terms.size());
    for (const auto& t : a.terms) ta.push_back(&t);
    for (const auto& t : b.terms) tb.push_back(&t);
    auto order = [](const HybridTerm* x, const HybridTerm* y) {
        if (x->qubits != y->qubits) return x->qubits < y->qubits;
        if (x->modes.empty()) return false;
        return x->modes[0].lo < y->modes[0].lo;
    };
    std::sort(ta.begin(), ta.end(), order);
    std::sort(tb.begin(), tb.end(), order);

    complex acc{};
    size_t ia = 0, ib = 0;
    while (ia < ta.size() && ib < tb.size()) {
        const uint32_t qa = ta[ia]->qubits, qb = tb[ib]->qubits;
        if (qa < qb) {
            ++ia;
            continue;
        }
        if (qb < qa) {
            ++ib;
            continue;
        }
        size_t ea = ia, eb = ib;
        while (ea < ta.size() && ta[ea]->qubits == qa) ++ea;
        while (eb < tb.size() && tb[eb]->qubits == qa) ++eb;
        size_t jstart = ib;
        for (size_t i = ia; i < ea; ++i) {
            const HybridTerm& x = *ta[i];
            if (x.modes.empty()) {
                for (size_t j = ib; j < eb; ++j) acc += std::conj(x.coeff) * tb[j]->coeff;
                continue;
            }
            while (jstart < eb && tb[jstart]->modes[0].hi <= x.modes[0].lo) ++jstart;
            for (size_t j = jstart; j < eb && tb[j]->modes[0].lo < x.modes[0].hi; ++j) {
                const HybridTerm& y = *tb[j];
                complex prod = std::conj(x.coeff) * y.coeff;
                for (int m = 0; m < a.n_modes && prod != complex{}; ++m) {
                    if (supports_disjoint(x.modes[m], y.modes[m])) {
                        prod = {};
                        break;
                    }
                    prod *= inner_product(x.modes[m], y.modes[m]);
                }
                acc += prod;
            }
        }
        ia = ea;
        ib = eb;
    }
    return acc;
}

inline double norm(const HybridState& s) {
    return std::sqrt(std::max(0.0, inner_product(s, s).real()));
}

inline HybridState scaled(const HybridState& s, complex c) {
    HybridState out = s;
    for (auto& t : out.terms) t.coeff *= c;
    return out;
}

// Term-wise sum; no implicit normalization.
inline HybridState added(const HybridState& a, const HybridState& b) {
    if (a.n_modes != b.n_modes || a.n_qubits != b.n_qubits)
        throw std::invalid_argument("added: shape mismatch");
    HybridState out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return merge_terms(out);
}

}  // namespace gkpsim
