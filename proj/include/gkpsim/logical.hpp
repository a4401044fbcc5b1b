#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkpsim/hybrid_state.hpp"
#include "gkpsim/matrix.hpp"

namespace gkpsim {

// Basic bit-manipulation maps on C^{2^k} (x) C^2 (and the embedding
// isometry C^{2^k} -> C^{2^{k+1}}), plus adjoints.
enum class MapKind { qcx, qcx_adj, lsb, lsb_adj, embed, embed_adj };

struct LogicalMap {
    MapKind kind = MapKind::qcx;
    int level = 1;  // the k in qCX_k / LSB_k / Embed_k
};

inline const char* map_name(MapKind k) {
    switch (k) {
        case MapKind::qcx: return "qcx";
        case MapKind::qcx_adj: return "qcx_adj";
        case MapKind::lsb: return "lsb";
        case MapKind::lsb_adj: return "lsb_adj";
        case MapKind::embed: return "embed";
        case MapKind::embed_adj: return "embed_adj";
    }
    return "?";
}

inline MapKind adjoint_of(MapKind k) {
    switch (k) {
        case MapKind::qcx: return MapKind::qcx_adj;
        case MapKind::qcx_adj: return MapKind::qcx;
        case MapKind::lsb: return MapKind::lsb_adj;
        case MapKind::lsb_adj: return MapKind::lsb;
        case MapKind::embed: return MapKind::embed_adj;
        case MapKind::embed_adj: return MapKind::embed;
    }
    return k;
}

// Dense matrix of a basic map, assembled from the defining formulas.
// Basis index for C^{2^k} (x) C^2 is x*2 + b.
inline CMat ideal_matrix(const LogicalMap& m) {
    if (m.level < 1 || m.level > 12) throw std::invalid_argument("ideal_matrix: level out of range");
    const int d = 1 << m.level;
    switch (m.kind) {
        case MapKind::qcx: {
            CMat u(2 * d, 2 * d);
            for (int x = 0; x < d; ++x)
                for (int b = 0; b < 2; ++b) u(((x + b) % d) * 2 + b, x * 2 + b) = 1.0;
            return u;
        }
        case MapKind::qcx_adj: {
            CMat u(2 * d, 2 * d);
            for (int x = 0; x < d; ++x)
                for (int b = 0; b < 2; ++b) u(((x - b + d) % d) * 2 + b, x * 2 + b) = 1.0;
            return u;
        }
        case MapKind::lsb:
        case MapKind::lsb_adj: {
            CMat u(2 * d, 2 * d);
            for (int x = 0; x < d; ++x)
                for (int b = 0; b < 2; ++b) u(x * 2 + (b ^ (x & 1)), x * 2 + b) = 1.0;
            return u;
        }
        case MapKind::embed: {
            CMat u(2 * d, d);
            for (int x = 0; x < d; ++x) u(2 * x, x) = 1.0;
            return u;
        }
        case MapKind::embed_adj: {
            CMat u(d, 2 * d);
            for (int x = 0; x < d; ++x) u(x, 2 * x) = 1.0;
            return u;
        }
    }
    throw std::logic_error("ideal_matrix: unreachable");
}

// One step of a logical circuit: a basic map applied to named registers, or
// an injected one-/two-qubit unitary on dimension-2 registers.
struct LogicalOp {
    enum class Type { basic, qubit_unitary };
    Type type = Type::basic;

    // basic
    MapKind kind = MapKind::qcx;
    int level = 1;
    int reg = -1;   // qudit register
    int qreg = -1;  // qubit register (qCX/LSB)

    // qubit_unitary
    Mat4 matrix{};
    int reg_a = -1;
    int reg_b = -1;  // -1 for a single-qubit unitary

    static LogicalOp basic(MapKind k, int level, int reg, int qreg = -1) {
        LogicalOp op;
        op.type = Type::basic;
        op.kind = k;
        op.level = level;
        op.reg = reg;
        op.qreg = qreg;
        return op;
    }
    static LogicalOp one_qubit(const Mat2& u, int reg) {
        LogicalOp op;
        op.type = Type::qubit_unitary;
        op.reg_a = reg;
        for (int i = 0; i < 4; ++i) op.matrix[i] = u[i];
        return op;
    }
    static LogicalOp two_qubit(const Mat4& u, int reg_a, int reg_b) {
        LogicalOp op;
        op.type = Type::qubit_unitary;
        op.reg_a = reg_a;
        op.reg_b = reg_b;
        op.matrix = u;
        return op;
    }
};

inline LogicalOp adjoint_op(const LogicalOp& op) {
    if (op.type == LogicalOp::Type::basic) {
        LogicalOp a = op;
        a.kind = adjoint_of(op.kind);
        return a;
    }
    LogicalOp a = op;
    const int n = (op.reg_b < 0) ? 2 : 4;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a.matrix[r * n + c] = std::conj(op.matrix[c * n + r]);
    return a;
}

// Logical circuit over a set of registers whose dimensions change through
// Embed/EmbedAdj. op_count counts basic bit-manipulation maps only; the
// injected qubit unitaries are tallied separately.
struct LogicalCircuit {
    std::vector<int> reg_dims;  // initial dimensions
    std::vector<LogicalOp> ops;
    std::map<std::string, int> roles;  // role name -> register index
    int op_count = 0;
    int qubit_gate_count = 0;

    void push(const LogicalOp& op) {
        ops.push_back(op);
        if (op.type == LogicalOp::Type::basic)
            ++op_count;
        else
            ++qubit_gate_count;
    }
};

inline void append_adjoint(LogicalCircuit& c, const std::vector<LogicalOp>& ops) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) c.push(adjoint_op(*it));
}

// Sparse basis-state simulation. Keys are register value tuples; dimension
// bookkeeping is dynamic and every op validates the dimensions it expects,
// so an EmbedAdj meeting an odd value (least significant bit not 0) is a
// hard error rather than silent data loss.
using BasisKey = std::vector<uint32_t>;
using SparseVec = std::map<BasisKey, complex>;

inline SparseVec run_logical(const LogicalCircuit& c, const BasisKey& input) {
    if (input.size() != c.reg_dims.size())
        throw std::invalid_argument("run_logical: register count mismatch");
    std::vector<uint32_t> dims(c.reg_dims.begin(), c.reg_dims.end());
    for (size_t r = 0; r < input.size(); ++r)
        if (input[r] >= dims[r]) throw std::invalid_argument("run_logical: input value out of range");

    SparseVec state;
    state[input] = 1.0;
    for (const auto& op : c.ops) {
        SparseVec next;
        if (op.type == LogicalOp::Type::basic) {
            const uint32_t d = 1u << op.level;
            switch (op.kind) {
                case MapKind::qcx:
                case MapKind::qcx_adj:
                case MapKind::lsb:
                case MapKind::lsb_adj:
                    if (dims[op.reg] != d) throw std::runtime_error("run_logical: qudit dim mismatch");
                    if (dims[op.qreg] != 2) throw std::runtime_error("run_logical: qubit dim mismatch");
                    break;
                case MapKind::embed:
                    if (dims[op.reg] != d) throw std::runtime_error("run_logical: embed dim mismatch");
                    break;
                case MapKind::embed_adj:
                    if (dims[op.reg] != 2 * d)
                        throw std::runtime_error("run_logical: embed_adj dim mismatch");
                    break;
            }
            for (const auto& [key, amp] : state) {
                BasisKey k = key;
                uint32_t& v = k[op.reg];
                switch (op.kind) {
                    case MapKind::qcx:
                        v = (v + k[op.qreg]) % d;
                        break;
                    case MapKind::qcx_adj:
                        v = (v + d - k[op.qreg]) % d;
                        break;
                    case MapKind::lsb:
                    case MapKind::lsb_adj:
                        k[op.qreg] ^= (v & 1u);
                        break;
                    case MapKind::embed:
                        v *= 2;
                        break;
                    case MapKind::embed_adj:
                        if (v & 1u)
                            throw std::runtime_error(
                                "run_logical: embed_adj on odd value (lsb not 0)");
                        v /= 2;
                        break;
                }
                next[k] += amp;
            }
            if (op.kind == MapKind::embed)
                dims[op.reg] *= 2;
            else if (op.kind == MapKind::embed_adj)
                dims[op.reg] /= 2;
        } else {
            const bool two = op.reg_b >= 0;
            if (dims[op.reg_a] != 2 || (two && dims[op.reg_b] != 2))
                throw std::runtime_error("run_logical: qubit unitary on non-qubit register");
            const int n = two ? 4 : 2;
            for (const auto& [key, amp] : state) {
                const uint32_t in =
                    two ? key[op.reg_a] * 2 + key[op.reg_b] : key[op.reg_a];
                for (int o = 0; o < n; ++o) {
                    const complex m = op.matrix[o * n + in];
                    if (m == complex{}) continue;
                    BasisKey k = key;
                    if (two) {
                        k[op.reg_a] = static_cast<uint32_t>(o) >> 1;
                        k[op.reg_b] = static_cast<uint32_t>(o) & 1u;
                    } else {
                        k[op.reg_a] = static_cast<uint32_t>(o);
                    }
                    next[k] += amp * m;
                }
            }
        }
        std::erase_if(next, [](const auto& kv) { return std::abs(kv.second) < 1e-300; });
        state = std::move(next);
    }
    return state;
}

namespace detail {

// Appends the Lemma 2.1 construction of the bit transfer C^j_l X to `c`:
//
//   W^l_j  = R^{l-(j-1)}_{j-1} ... R^{l-1}_1 R_l   (register split)
//   V^j_l  = (W^l_j)^dag (qCX^dag_{l-j})_{Q->S} (LSB_{l-j})_{S->Q} W^l_j
//
// Registers: s = code qudit (dim 2^l), q = transfer qubit, c1 = catalyst
// seeding the split-off register (grows to dim 2^j), c2 = catalyst used by
// each R-tilde step. Exactly max(2, 12j-4) basic maps.
inline void append_bit_transfer(LogicalCircuit& c, int ell, int j, int s, int q, int c1, int c2) {
    using Op = LogicalOp;
    if (j == 0) {
        c.push(Op::basic(MapKind::lsb, ell, s, q));
        c.push(Op::basic(MapKind::qcx_adj, ell, s, q));
        return;
    }
    // forward split W^l_j
    c.push(Op::basic(MapKind::lsb, ell, s, c1));
    c.push(Op::basic(MapKind::qcx_adj, ell, s, c1));
    c.push(Op::basic(MapKind::embed_adj, ell - 1, s));
    for (int k = 1; k <= j - 1; ++k) {
        c.push(Op::basic(MapKind::lsb, ell - k, s, c2));
        c.push(Op::basic(MapKind::qcx_adj, ell - k, s, c2));
        c.push(Op::basic(MapKind::embed_adj, ell - k - 1, s));
        c.push(Op::basic(MapKind::embed, k, c1));
        c.push(Op::basic(MapKind::qcx, k + 1, c1, c2));
        c.push(Op::basic(MapKind::lsb, k + 1, c1, c2));
    }
    // transfer of bit j on the shrunk register
    c.push(Op::basic(MapKind::lsb, ell - j, s, q));
    c.push(Op::basic(MapKind::qcx_adj, ell - j, s, q));
    // backward split (W^l_j)^dag
    for (int k = j - 1; k >= 1; --k) {
        c.push(Op::basic(MapKind::lsb, k + 1, c1, c2));
        c.push(Op::basic(MapKind::qcx_adj, k + 1, c1, c2));
        c.push(Op::basic(MapKind::embed_adj, k, c1));
        c.push(Op::basic(MapKind::embed, ell - k - 1, s));
        c.push(Op::basic(MapKind::qcx, ell - k, s, c2));
        c.push(Op::basic(MapKind::lsb, ell - k, s, c2));
    }
    c.push(Op::basic(MapKind::embed, ell - 1, s));
    c.push(Op::basic(MapKind::qcx, ell, s, c1));
    c.push(Op::basic(MapKind::lsb, ell, s, c1));
}

}  // namespace detail

// Register split W^l_j alone (forward half of the transfer construction),
// for round-trip and action tests. Registers: S, C1 (split target), C2.
inline LogicalCircuit build_register_split(int ell, int j) {
    if (ell < 1) throw std::invalid_argument("build_register_split: ell must be >= 1");
    if (j < 0 || j >= ell) throw std::invalid_argument("build_register_split: j out of range");
    LogicalCircuit c;
    c.reg_dims = {1 << ell, 2, 2};
    c.roles = {{"S", 0}, {"C1", 1}, {"C2", 2}};
    if (j == 0) return c;
    using Op = LogicalOp;
    c.push(Op::basic(MapKind::lsb, ell, 0, 1));
    c.push(Op::basic(MapKind::qcx_adj, ell, 0, 1));
    c.push(Op::basic(MapKind::embed_adj, ell - 1, 0));
    for (int k = 1; k <= j - 1; ++k) {
        c.push(Op::basic(MapKind::lsb, ell - k, 0, 2));
        c.push(Op::basic(MapKind::qcx_adj, ell - k, 0, 2));
        c.push(Op::basic(MapKind::embed_adj, ell - k - 1, 0));
        c.push(Op::basic(MapKind::embed, k, 1));
        c.push(Op::basic(MapKind::qcx, k + 1, 1, 2));
        c.push(Op::basic(MapKind::lsb, k + 1, 1, 2));
    }
    return c;
}

// Lemma 2.1 circuit V^j_l over (qudit, transfer qubit, 2 catalyst qubits).
inline LogicalCircuit build_bit_transfer(int ell, int j) {
    if (ell < 1) throw std::invalid_argument("build_bit_transfer: ell must be >= 1");
    if (j < 0 || j >= ell) throw std::invalid_argument("build_bit_transfer: j out of range");
    LogicalCircuit c;
    c.reg_dims = {1 << ell, 2, 2, 2};
    c.roles = {{"S", 0}, {"Q", 1}, {"C1", 2}, {"C2", 3}};
    detail::append_bit_transfer(c, ell, j, 0, 1, 2, 3);
    return c;
}

// Lemma 2.2 circuit: U acting on logical qubits A_j, A_k of the encoded
// integer, via two transfers onto Q1, Q2 and their adjoints. U's basis is
// |q1 q2> with q1 (the A_j bit) as the high bit.
inline LogicalCircuit build_two_qubit(int ell, int j, int k, const Mat4& u) {
    if (ell < 2) throw std::invalid_argument("build_two_qubit: ell must be >= 2");
    if (!(0 <= j && j < k && k < ell))
        throw std::invalid_argument("build_two_qubit: need 0 <= j < k < ell");
    if (!is_unitary4(u)) throw std::invalid_argument("build_two_qubit: U not unitary");
    LogicalCircuit c;
    c.reg_dims = {1 << ell, 2, 2, 2, 2};
    c.roles = {{"S", 0}, {"Q1", 1}, {"Q2", 2}, {"Q3", 3}, {"Q4", 4}};
    LogicalCircuit fwd_j, fwd_k;
    fwd_j.reg_dims = c.reg_dims;
    fwd_k.reg_dims = c.reg_dims;
    detail::append_bit_transfer(fwd_j, ell, j, 0, 1, 3, 4);
    detail::append_bit_transfer(fwd_k, ell, k, 0, 2, 3, 4);
    for (const auto& op : fwd_j.ops) c.push(op);
    for (const auto& op : fwd_k.ops) c.push(op);
    c.push(LogicalOp::two_qubit(u, 1, 2));
    append_adjoint(c, fwd_k.ops);
    append_adjoint(c, fwd_j.ops);
    return c;
}

// Appendix E variant: U acts on A_j of the first encoded integer and B_k of
// the second; transfers act on the respective qudit wires.
inline LogicalCircuit build_bipartite_two_qubit(int ell, int j, int k, const Mat4& u) {
    if (ell < 1) throw std::invalid_argument("build_bipartite_two_qubit: ell must be >= 1");
    if (j < 0 || j >= ell || k < 0 || k >= ell)
        throw std::invalid_argument("build_bipartite_two_qubit: indices out of range");
    if (!is_unitary4(u)) throw std::invalid_argument("build_bipartite_two_qubit: U not unitary");
    LogicalCircuit c;
    c.reg_dims = {1 << ell, 1 << ell, 2, 2, 2, 2};
    c.roles = {{"S1", 0}, {"S2", 1}, {"Q1", 2}, {"Q2", 3}, {"Q3", 4}, {"Q4", 5}};
    LogicalCircuit fwd_j, fwd_k;
    fwd_j.reg_dims = c.reg_dims;
    fwd_k.reg_dims = c.reg_dims;
    detail::append_bit_transfer(fwd_j, ell, j, 0, 2, 4, 5);
    detail::append_bit_transfer(fwd_k, ell, k, 1, 3, 4, 5);
    for (const auto& op : fwd_j.ops) c.push(op);
    for (const auto& op : fwd_k.ops) c.push(op);
    c.push(LogicalOp::two_qubit(u, 2, 3));
    append_adjoint(c, fwd_k.ops);
    append_adjoint(c, fwd_j.ops);
    return c;
}

}  // namespace gkpsim
