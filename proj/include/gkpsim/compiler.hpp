#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkpsim/logical.hpp"

namespace gkpsim {

// Squeezing trick: e^{i alpha Q} = (M^dag_{alpha'})^n e^{iQ} (M_{alpha'})^n
// with alpha' = alpha^{1/n}. n = ceil(|log2 alpha|) keeps every emitted
// squeeze within the strength-2 budget of the bounded elementary set (the
// ceil of the natural log would let alpha' reach e).
struct SqueezeDecomposition {
    double alpha = 1.0;
    double alpha_prime = 1.0;
    int n = 0;
};

inline SqueezeDecomposition squeeze_decompose(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("squeeze_decompose: alpha must be > 0");
    SqueezeDecomposition d;
    d.alpha = alpha;
    if (alpha == 1.0) return d;
    d.n = static_cast<int>(std::ceil(std::abs(std::log2(alpha)) - 1e-12));
    if (d.n < 1) d.n = 1;
    d.alpha_prime = std::exp(std::log(alpha) / d.n);
    return d;
}

// LSB displacement strength for a 2^k-dimensional code:
// alpha_k = pi sqrt(2^k/(2 pi)) = sqrt(pi) 2^{(k-1)/2}.
inline double lsb_displacement(int k) {
    return std::sqrt(M_PI) * std::pow(2.0, 0.5 * (k - 1));
}

// Lowered physical circuit plus the bookkeeping the audits need.
struct ElementaryCircuit {
    int n_modes = 0;
    int n_qubits = 0;
    std::vector<ElementaryGate> gates;
    std::map<std::string, int> resource_map;  // role -> physical wire
    int logical_map_count = 0;   // basic maps consumed by the lowering
    int bounded_form_count = 0;  // elements of the U_elem(2, zeta) form (qCX 1, Embed 1, LSB 3)

    int total() const { return static_cast<int>(gates.size()); }

    std::map<std::string, int> counts() const {
        std::map<std::string, int> c;
        for (const auto& g : gates) c[kind_name(g.kind)]++;
        return c;
    }

    double max_squeeze() const {
        double m = 1.0;
        for (const auto& g : gates)
            if (g.kind == ElementaryGate::Kind::squeeze) m = std::max(m, g.strength());
        return m;
    }

    double max_displacement() const {
        double m = 0.0;
        for (const auto& g : gates)
            if (g.kind != ElementaryGate::Kind::squeeze && g.kind != ElementaryGate::Kind::one_qubit &&
                g.kind != ElementaryGate::Kind::two_qubit)
                m = std::max(m, g.strength());
        return m;
    }

    static const char* kind_name(ElementaryGate::Kind k) {
        using K = ElementaryGate::Kind;
        switch (k) {
            case K::disp_q: return "disp_q";
            case K::disp_p: return "disp_p";
            case K::squeeze: return "squeeze";
            case K::ctrl_disp_q: return "ctrl_disp_q";
            case K::ctrl_disp_p: return "ctrl_disp_p";
            case K::one_qubit: return "one_qubit";
            case K::two_qubit: return "two_qubit";
        }
        return "?";
    }
};

namespace detail {

inline Mat2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return Mat2{s, s, s, -s};
}

// Table-3 lowering of one basic map acting on `mode` (and `qubit` for
// qCX/LSB) at level k. LSB expands through the squeezing trick so only a
// unit-strength controlled displacement remains controlled.
inline void append_basic(ElementaryCircuit& c, MapKind kind, int k, int mode, int qubit) {
    using G = ElementaryGate;
    ++c.logical_map_count;
    switch (kind) {
        case MapKind::qcx:
            c.gates.push_back(G::CtrlDispP(qubit, mode, std::sqrt(2.0 * M_PI / (1 << k))));
            c.bounded_form_count += 1;
            return;
        case MapKind::qcx_adj:
            c.gates.push_back(G::CtrlDispP(qubit, mode, -std::sqrt(2.0 * M_PI / (1 << k))));
            c.bounded_form_count += 1;
            return;
        case MapKind::embed:
            c.gates.push_back(G::Squeeze(mode, std::sqrt(2.0)));
            c.bounded_form_count += 1;
            return;
        case MapKind::embed_adj:
            c.gates.push_back(G::Squeeze(mode, 1.0 / std::sqrt(2.0)));
            c.bounded_form_count += 1;
            return;
        case MapKind::lsb:
        case MapKind::lsb_adj: {
            const double sign = (kind == MapKind::lsb) ? 1.0 : -1.0;
            const auto sd = squeeze_decompose(lsb_displacement(k));
            c.gates.push_back(G::OneQubit(qubit, hadamard()));
            for (int i = 0; i < sd.n; ++i) c.gates.push_back(G::Squeeze(mode, sd.alpha_prime));
            c.gates.push_back(G::CtrlDispQ(qubit, mode, sign));
            for (int i = 0; i < sd.n; ++i) c.gates.push_back(G::Squeeze(mode, 1.0 / sd.alpha_prime));
            c.gates.push_back(G::OneQubit(qubit, hadamard()));
            c.bounded_form_count += 3;
            return;
        }
    }
}

}  // namespace detail

// Physical realization of one basic map in the 2^k-dimensional code:
// qCX_k -> 1 gate, Embed_k -> 1 gate, LSB_k -> 2n+3 <= k+6 gates.
inline ElementaryCircuit lower_basic(const LogicalMap& m) {
    if (m.level < 1) throw std::invalid_argument("lower_basic: level must be >= 1");
    ElementaryCircuit c;
    c.n_modes = 1;
    const bool needs_qubit = (m.kind != MapKind::embed && m.kind != MapKind::embed_adj);
    c.n_qubits = needs_qubit ? 1 : 0;
    c.resource_map = needs_qubit ? std::map<std::string, int>{{"S", 0}, {"Q", 0}}
                                 : std::map<std::string, int>{{"S", 0}};
    detail::append_basic(c, m.kind, m.level, 0, needs_qubit ? 0 : -1);
    return c;
}

// The physical form of the Lemma 2.1 construction on oscillators S (code)
// and B (auxiliary, prepared in GKP(0)_2). The logical split register lives
// in B; moving a freshly extracted bit from the catalyst qubit into B costs
// one extra (qCX_1, LSB_1) pair on each side relative to the purely logical
// count, 12j instead of 12j-4 basic maps.
//
// Registers of the returned ops: 0 = S (dim 2^l), 1 = B (dim 2, grows to
// 2^j), 2 = transfer qubit, 3 = catalyst qubit.
inline std::vector<LogicalOp> physical_transfer_ops(int ell, int j) {
    if (ell < 1) throw std::invalid_argument("physical_transfer_ops: ell must be >= 1");
    if (j < 0 || j >= ell) throw std::invalid_argument("physical_transfer_ops: j out of range");
    const int S = 0, B = 1, Q = 2, C = 3;
    std::vector<LogicalOp> ops;
    auto push = [&](MapKind k, int level, int reg, int qreg = -1) {
        ops.push_back(LogicalOp::basic(k, level, reg, qreg));
    };
    if (j == 0) {
        push(MapKind::lsb, ell, S, Q);
        push(MapKind::qcx_adj, ell, S, Q);
        return ops;
    }
    // extract x_0 via the catalyst and write it into B
    push(MapKind::lsb, ell, S, C);
    push(MapKind::qcx_adj, ell, S, C);
    push(MapKind::embed_adj, ell - 1, S);
    push(MapKind::qcx, 1, B, C);
    push(MapKind::lsb, 1, B, C);
    for (int k = 1; k <= j - 1; ++k) {
        push(MapKind::lsb, ell - k, S, C);
        push(MapKind::qcx_adj, ell - k, S, C);
        push(MapKind::embed_adj, ell - k - 1, S);
        push(MapKind::embed, k, B);
        push(MapKind::qcx, k + 1, B, C);
        push(MapKind::lsb, k + 1, B, C);
    }
    push(MapKind::lsb, ell - j, S, Q);
    push(MapKind::qcx_adj, ell - j, S, Q);
    for (int k = j - 1; k >= 1; --k) {
        push(MapKind::lsb, k + 1, B, C);
        push(MapKind::qcx_adj, k + 1, B, C);
        push(MapKind::embed_adj, k, B);
        push(MapKind::embed, ell - k - 1, S);
        push(MapKind::qcx, ell - k, S, C);
        push(MapKind::lsb, ell - k, S, C);
    }
    push(MapKind::lsb, 1, B, C);
    push(MapKind::qcx_adj, 1, B, C);
    push(MapKind::embed, ell - 1, S);
    push(MapKind::qcx, ell, S, C);
    push(MapKind::lsb, ell, S, C);
    return ops;
}

// The same op list as a runnable LogicalCircuit (for exactness tests).
inline LogicalCircuit physical_transfer_circuit(int ell, int j) {
    LogicalCircuit c;
    c.reg_dims = {1 << ell, 2, 2, 2};
    c.roles = {{"S", 0}, {"B", 1}, {"Q", 2}, {"C", 3}};
    for (const auto& op : physical_transfer_ops(ell, j)) c.push(op);
    return c;
}

namespace detail {

// Lower a list of physical transfer ops onto concrete wires.
inline void append_transfer(ElementaryCircuit& c, int ell, int j, int mode_s, int mode_b,
                            int qubit_t, int qubit_c) {
    for (const auto& op : physical_transfer_ops(ell, j)) {
        const int mode = (op.reg == 0) ? mode_s : mode_b;
        int qubit = -1;
        if (op.qreg == 2) qubit = qubit_t;
        if (op.qreg == 3) qubit = qubit_c;
        append_basic(c, op.kind, op.level, mode, qubit);
    }
}

inline std::vector<ElementaryGate> adjoint_gates(const std::vector<ElementaryGate>& g) {
    return inverted(g);
}

}  // namespace detail

// W_{C^j_l X}: 2 modes (S code, B auxiliary holding GKP(0)_2) + transfer
// qubit + catalyst qubit. At most 85 l^2 elementary gates; at most 36 l
// elements in the bounded U_elem(2, zeta) form.
inline ElementaryCircuit lower_transfer(int ell, int j) {
    ElementaryCircuit c;
    c.n_modes = 2;
    c.n_qubits = 2;
    c.resource_map = {{"S", 0}, {"B", 1}, {"Q", 0}, {"Qc", 1}};
    detail::append_transfer(c, ell, j, 0, 1, 0, 1);
    return c;
}

// W_U for U on logical qubits (A_j, A_k), j < k: transfer j -> Q1,
// transfer k -> Q2, U on (Q1, Q2), adjoint transfers. B and the catalyst
// qubit are reused by all four transfer blocks.
inline ElementaryCircuit lower_two_qubit(int ell, int j, int k, const Mat4& u) {
    if (ell < 2) throw std::invalid_argument("lower_two_qubit: ell must be >= 2");
    if (!(0 <= j && j < k && k < ell))
        throw std::invalid_argument("lower_two_qubit: need 0 <= j < k < ell");
    if (!is_unitary4(u)) throw std::invalid_argument("lower_two_qubit: U not unitary");
    ElementaryCircuit c;
    c.n_modes = 2;
    c.n_qubits = 3;
    c.resource_map = {{"S", 0}, {"B", 1}, {"Q1", 0}, {"Q2", 1}, {"Q", 2}};
    ElementaryCircuit tj, tk;
    tj.n_modes = tk.n_modes = 2;
    tj.n_qubits = tk.n_qubits = 3;
    detail::append_transfer(tj, ell, j, 0, 1, 0, 2);
    detail::append_transfer(tk, ell, k, 0, 1, 1, 2);
    auto extend = [&c](const std::vector<ElementaryGate>& g) {
        c.gates.insert(c.gates.end(), g.begin(), g.end());
    };
    extend(tj.gates);
    extend(tk.gates);
    c.gates.push_back(ElementaryGate::TwoQubit(0, 1, u));
    extend(detail::adjoint_gates(tk.gates));
    extend(detail::adjoint_gates(tj.gates));
    c.logical_map_count = 2 * (tj.logical_map_count + tk.logical_map_count);
    c.bounded_form_count = 2 * (tj.bounded_form_count + tk.bounded_form_count) + 1;
    return c;
}

// Single-qubit factor on logical qubit A_j: one transfer pair around a
// one-qubit gate on Q1.
inline ElementaryCircuit lower_single_qubit(int ell, int j, const Mat2& u) {
    if (ell < 1) throw std::invalid_argument("lower_single_qubit: ell must be >= 1");
    if (j < 0 || j >= ell) throw std::invalid_argument("lower_single_qubit: j out of range");
    ElementaryCircuit c;
    c.n_modes = 2;
    c.n_qubits = 3;
    c.resource_map = {{"S", 0}, {"B", 1}, {"Q1", 0}, {"Q2", 1}, {"Q", 2}};
    ElementaryCircuit tj;
    tj.n_modes = 2;
    tj.n_qubits = 3;
    detail::append_transfer(tj, ell, j, 0, 1, 0, 2);
    c.gates = tj.gates;
    c.gates.push_back(ElementaryGate::OneQubit(0, u));
    const auto adj = detail::adjoint_gates(tj.gates);
    c.gates.insert(c.gates.end(), adj.begin(), adj.end());
    c.logical_map_count = 2 * tj.logical_map_count;
    c.bounded_form_count = 2 * tj.bounded_form_count + 1;
    return c;
}

// Appendix E bipartite variant: qudit wires S1, S2 with transfers acting on
// the respective wires; B and the catalyst are shared.
inline ElementaryCircuit lower_two_qubit_bipartite(int ell, int j, int k, const Mat4& u) {
    if (ell < 1) throw std::invalid_argument("lower_two_qubit_bipartite: ell must be >= 1");
    if (j < 0 || j >= ell || k < 0 || k >= ell)
        throw std::invalid_argument("lower_two_qubit_bipartite: indices out of range");
    if (!is_unitary4(u)) throw std::invalid_argument("lower_two_qubit_bipartite: U not unitary");
    ElementaryCircuit c;
    c.n_modes = 3;
    c.n_qubits = 3;
    c.resource_map = {{"S1", 0}, {"S2", 1}, {"B", 2}, {"Q1", 0}, {"Q2", 1}, {"Q", 2}};
    ElementaryCircuit tj, tk;
    tj.n_modes = tk.n_modes = 3;
    tj.n_qubits = tk.n_qubits = 3;
    detail::append_transfer(tj, ell, j, 0, 2, 0, 2);
    detail::append_transfer(tk, ell, k, 1, 2, 1, 2);
    auto extend = [&c](const std::vector<ElementaryGate>& g) {
        c.gates.insert(c.gates.end(), g.begin(), g.end());
    };
    extend(tj.gates);
    extend(tk.gates);
    c.gates.push_back(ElementaryGate::TwoQubit(0, 1, u));
    extend(detail::adjoint_gates(tk.gates));
    extend(detail::adjoint_gates(tj.gates));
    c.logical_map_count = 2 * (tj.logical_map_count + tk.logical_map_count);
    c.bounded_form_count = 2 * (tj.bounded_form_count + tk.bounded_form_count) + 1;
    return c;
}

// --- strength/count audit --------------------------------------------------

struct AuditBounds {
    double alpha = 2.0;  // squeezing bound
    double zeta = 1.0;   // displacement bound
    long max_count = 0;  // 0 = no count bound
};

struct AuditReport {
    bool pass = true;
    std::vector<std::string> violations;
};

inline AuditReport audit(const ElementaryCircuit& c, const AuditBounds& b) {
    AuditReport r;
    const double slop = 1e-9;
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        const std::string id =
            std::string(ElementaryCircuit::kind_name(g.kind)) + "@" + std::to_string(i);
        if (g.kind == ElementaryGate::Kind::squeeze) {
            if (g.strength() > b.alpha + slop)
                r.violations.push_back(id + ": squeeze strength " + std::to_string(g.strength()) +
                                       " exceeds " + std::to_string(b.alpha));
        } else if (g.kind != ElementaryGate::Kind::one_qubit &&
                   g.kind != ElementaryGate::Kind::two_qubit) {
            if (g.strength() > b.zeta + slop)
                r.violations.push_back(id + ": displacement strength " +
                                       std::to_string(g.strength()) + " exceeds " +
                                       std::to_string(b.zeta));
        }
    }
    if (b.max_count > 0 && c.total() > b.max_count)
        r.violations.push_back("count " + std::to_string(c.total()) + " exceeds " +
                               std::to_string(b.max_count));
    r.pass = r.violations.empty();
    return r;
}

// --- serialization ----------------------------------------------------------

inline nlohmann::ordered_json gate_to_json(const ElementaryGate& g) {
    using K = ElementaryGate::Kind;
    nlohmann::ordered_json o;
    o["kind"] = ElementaryCircuit::kind_name(g.kind);
    nlohmann::ordered_json wires = nlohmann::ordered_json::object();
    if (g.mode >= 0) wires["mode"] = g.mode;
    if (g.qubit >= 0) wires["qubit"] = g.qubit;
    if (g.qubit2 >= 0) wires["qubit2"] = g.qubit2;
    o["wires"] = wires;
    if (g.kind == K::one_qubit || g.kind == K::two_qubit) {
        const int n = (g.kind == K::one_qubit) ? 2 : 4;
        nlohmann::ordered_json m = nlohmann::ordered_json::array();
        for (int i = 0; i < n * n; ++i)
            m.push_back({g.matrix[i].real(), g.matrix[i].imag()});
        o["matrix"] = m;
    } else {
        o["parameter"] = g.param;
    }
    return o;
}

inline nlohmann::ordered_json to_json(const ElementaryCircuit& c) {
    nlohmann::ordered_json o;
    o["schema"] = 1;
    o["n_modes"] = c.n_modes;
    o["n_qubits"] = c.n_qubits;
    o["resources"] = c.resource_map;
    o["counts"] = c.counts();
    o["total"] = c.total();
    o["logical_map_count"] = c.logical_map_count;
    o["bounded_form_count"] = c.bounded_form_count;
    o["max_squeeze"] = c.max_squeeze();
    o["max_displacement"] = c.max_displacement();
    nlohmann::ordered_json gates = nlohmann::ordered_json::array();
    for (const auto& g : c.gates) gates.push_back(gate_to_json(g));
    o["gates"] = gates;
    return o;
}

}  // namespace gkpsim
