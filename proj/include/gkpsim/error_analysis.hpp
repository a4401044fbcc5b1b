#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkpsim/compiler.hpp"
#include "gkpsim/gkp_states.hpp"
#include "gkpsim/hybrid_state.hpp"
#include "gkpsim/matrix.hpp"

namespace gkpsim {

// B = Enc(U)^dag pi_out W pi_in restricted to the input code basis, with the
// summary statistics the sparse-B corollary consumes. Entries below the
// 1e-12 sparsity threshold count as structural zeros.
struct BMatrix {
    int d = 0;
    CMat entries;
    int sparsity = 0;
    double min_diag = 0.0;
    double max_offdiag = 0.0;
    double diag_imag_max = 0.0;
    double largest_discarded = 0.0;
    double subspace_deviation = 0.0;  // ||B - I||_F, diagnostic only
};

namespace detail {

inline void check_orthonormal(const std::vector<HybridState>& basis, const char* label) {
    for (size_t j = 0; j < basis.size(); ++j) {
        for (size_t k = j; k < basis.size(); ++k) {
            const complex g = inner_product(basis[j], basis[k]);
            const double want = (j == k) ? 1.0 : 0.0;
            if (std::abs(g - want) > 1e-10)
                throw std::invalid_argument(std::string("compute_B: basis '") + label +
                                            "' not orthonormal at pair (" + std::to_string(j) +
                                            "," + std::to_string(k) + "), deviation " +
                                            std::to_string(std::abs(g - want)));
        }
    }
}

inline BMatrix summarize_B(CMat b) {
    BMatrix out;
    out.d = b.rows;
    out.min_diag = 1e300;
    const double thr = 1e-12;
    std::vector<int> row_nz(b.rows, 0), col_nz(b.cols, 0);
    for (int r = 0; r < b.rows; ++r) {
        for (int c = 0; c < b.cols; ++c) {
            const double mag = std::abs(b(r, c));
            if (mag > thr) {
                ++row_nz[r];
                ++col_nz[c];
            } else {
                out.largest_discarded = std::max(out.largest_discarded, mag);
            }
            if (r == c) {
                out.min_diag = std::min(out.min_diag, mag);
                out.diag_imag_max = std::max(out.diag_imag_max, std::abs(b(r, c).imag()));
            } else if (mag > thr) {
                out.max_offdiag = std::max(out.max_offdiag, mag);
            }
        }
    }
    for (int r = 0; r < b.rows; ++r) out.sparsity = std::max(out.sparsity, row_nz[r]);
    for (int c = 0; c < b.cols; ++c) out.sparsity = std::max(out.sparsity, col_nz[c]);
    CMat dev = b;
    for (int i = 0; i < b.rows; ++i) dev(i, i) -= 1.0;
    out.subspace_deviation = dev.frobenius();
    out.entries = std::move(b);
    return out;
}

}  // namespace detail

// B_{j,k} = sum_m conj(U_{m,j}) <enc_out m | W | enc_in k>. `logical` is the
// d_out x d_in matrix of the target unitary/isometry in the computational
// basis.
inline BMatrix compute_B(const std::vector<ElementaryGate>& w, const CMat& logical,
                         const std::vector<HybridState>& code_in,
                         const std::vector<HybridState>& code_out) {
    const int d_in = static_cast<int>(code_in.size());
    const int d_out = static_cast<int>(code_out.size());
    if (logical.rows != d_out || logical.cols != d_in)
        throw std::invalid_argument("compute_B: logical matrix shape mismatch");
    detail::check_orthonormal(code_in, "in");
    detail::check_orthonormal(code_out, "out");
    CMat m(d_out, d_in);
    for (int k = 0; k < d_in; ++k) {
        const HybridState evolved = run_circuit(code_in[k], w);
        for (int r = 0; r < d_out; ++r) m(r, k) = inner_product(code_out[r], evolved);
    }
    CMat b(d_in, d_in);
    for (int j = 0; j < d_in; ++j)
        for (int k = 0; k < d_in; ++k) {
            complex s{};
            for (int r = 0; r < d_out; ++r) s += std::conj(logical(r, j)) * m(r, k);
            b(j, k) = s;
        }
    return detail::summarize_B(std::move(b));
}

// Sparse-B corollary: err <= 8 ((1 - min_j |B_jj|) + (s-1) max off)^{1/2},
// requiring real nonzero diagonal entries.
inline double sparse_bound(const BMatrix& b) {
    if (b.d < 1) throw std::invalid_argument("sparse_bound: empty B");
    for (int i = 0; i < b.d; ++i) {
        const complex v = b.entries(i, i);
        if (std::abs(v) <= 1e-12)
            throw std::invalid_argument("sparse_bound: zero diagonal entry at " + std::to_string(i));
        if (std::abs(v.imag()) > 1e-8)
            throw std::invalid_argument("sparse_bound: diagonal entry " + std::to_string(i) +
                                        " not real, |Im| = " + std::to_string(std::abs(v.imag())));
    }
    const double inner = (1.0 - b.min_diag) + (b.sparsity - 1) * b.max_offdiag;
    return 8.0 * std::sqrt(std::max(0.0, inner));
}

// Subadditivity of the logical gate error under composition.
inline double compose_bounds(const std::vector<double>& steps) {
    double s = 0.0;
    for (double v : steps) {
        if (v < 0.0) throw std::invalid_argument("compose_bounds: negative step");
        s += v;
    }
    return s;
}

// Noisy implementation: ideal error plus one identity-channel error per step.
inline double noisy_bound(double ideal, const std::vector<double>& noise_errors) {
    if (ideal < 0.0) throw std::invalid_argument("noisy_bound: negative ideal error");
    std::vector<double> steps = noise_errors;
    steps.push_back(ideal);
    return compose_bounds(steps);
}

// --- closed-form bounds ------------------------------------------------------

enum class BoundTarget {
    qcx,                  // 8 kappa
    lsb,                  // 16 2^l Delta + 32 (Delta/eps)^2
    transfer,             // 96 l kappa
    two_qubit,            // 400 l kappa
    circuit,              // T * 400 l kappa
    comb_qcx,             // 12 / sqrt(L)
    comb_circuit,         // 600 * 2^{2l} * T * Delta
    bipartite_two_qubit,  // 400 l kappa
    bipartite_comb        // 600 * 2^{2l} * Delta
};

struct BoundParams {
    int l = 1;
    double kappa = 0.1;
    double delta = 0.0;  // defaults to the symmetric preset when <= 0
    double eps = 0.0;    // defaults to 2^{-(l+1)} when <= 0
    long L = 0;
    long T = 1;
};

struct AnalyticBound {
    double value = 0.0;
    bool hypotheses_ok = true;
    bool vacuous = false;  // >= 2, the diamond-norm ceiling
    std::string note;
};

inline AnalyticBound analytic_bound(BoundTarget target, const BoundParams& in) {
    BoundParams p = in;
    if (p.l < 1) throw std::invalid_argument("analytic_bound: l must be >= 1");
    const double d = std::pow(2.0, p.l);
    if (p.delta <= 0.0) p.delta = p.kappa / (2.0 * M_PI * d);
    if (p.eps <= 0.0) p.eps = 1.0 / (2.0 * d);
    AnalyticBound out;
    auto hyp = [&](bool ok, const char* why) {
        if (!ok) {
            out.hypotheses_ok = false;
            if (!out.note.empty()) out.note += "; ";
            out.note += why;
        }
    };
    switch (target) {
        case BoundTarget::qcx:
        case BoundTarget::transfer:
        case BoundTarget::two_qubit:
        case BoundTarget::circuit:
        case BoundTarget::bipartite_two_qubit:
            hyp(p.kappa > 0.0 && p.kappa < 0.25, "kappa outside (0,1/4)");
            hyp(p.delta > 0.0 && p.delta < 0.25, "delta outside (0,1/4)");
            hyp(p.eps > 0.0 && p.eps <= 1.0 / (2.0 * d), "eps above 2^-(l+1)");
            break;
        case BoundTarget::lsb:
            hyp(p.delta > 0.0 && p.delta < 0.25, "delta outside (0,1/4)");
            hyp(p.eps > 0.0 && p.eps <= 1.0 / (2.0 * d), "eps above 2^-(l+1)");
            break;
        case BoundTarget::comb_qcx:
            hyp(p.L >= 2 && p.L % 2 == 0, "L must be even >= 2");
            break;
        case BoundTarget::comb_circuit:
        case BoundTarget::bipartite_comb:
            hyp(p.delta > 0.0 && p.delta < 1.0 / d, "delta must be < 2^-l");
            break;
    }
    switch (target) {
        case BoundTarget::qcx: out.value = 8.0 * p.kappa; break;
        case BoundTarget::lsb:
            out.value = 16.0 * d * p.delta + 32.0 * (p.delta / p.eps) * (p.delta / p.eps);
            break;
        case BoundTarget::transfer: out.value = 96.0 * p.l * p.kappa; break;
        case BoundTarget::two_qubit:
        case BoundTarget::bipartite_two_qubit: out.value = 400.0 * p.l * p.kappa; break;
        case BoundTarget::circuit: out.value = static_cast<double>(p.T) * 400.0 * p.l * p.kappa; break;
        case BoundTarget::comb_qcx: out.value = 12.0 / std::sqrt(static_cast<double>(p.L)); break;
        case BoundTarget::comb_circuit:
            out.value = 600.0 * d * d * static_cast<double>(p.T) * p.delta;
            break;
        case BoundTarget::bipartite_comb: out.value = 600.0 * d * d * p.delta; break;
    }
    out.vacuous = out.value >= 2.0;
    return out;
}

// --- measured matrix elements -------------------------------------------------

// Full matrix of <enc(j,b)| W |enc(k,b')> for a lowered basic map on the
// code basis (x) qubit basis; index (j,b) -> j*2 + b.
inline CMat melem_matrix(MapKind kind, const GkpCodeParams& p, int ell) {
    if ((1 << ell) != p.d) throw std::invalid_argument("melem_matrix: p.d must equal 2^ell");
    const auto basis = code_basis(p);
    const auto circ = lower_basic({kind, ell});
    std::vector<HybridState> enc;
    enc.reserve(2 * p.d);
    for (int j = 0; j < p.d; ++j)
        for (uint32_t b = 0; b < 2; ++b) enc.push_back(HybridState::product({basis[j]}, b, 1));
    CMat m(2 * p.d, 2 * p.d);
    for (int col = 0; col < 2 * p.d; ++col) {
        const HybridState evolved = run_circuit(enc[col], circ.gates);
        for (int row = 0; row < 2 * p.d; ++row) m(row, col) = inner_product(enc[row], evolved);
    }
    return m;
}

// Embedding overlaps <GKP(2j)_{2d}, M_sqrt2 GKP(j)_d> for j = 0..d-1.
inline std::vector<complex> embed_overlaps(const GkpCodeParams& p) {
    GkpCodeParams q = p;
    q.d = 2 * p.d;
    std::vector<complex> out;
    out.reserve(p.d);
    for (int j = 0; j < p.d; ++j) {
        const ModeState src = make_codeword(p, j);
        const ModeState dst = detail::make_codeword_relaxed(q, 2 * j);
        out.push_back(overlap(dst, dilate(src, std::sqrt(2.0))));
    }
    return out;
}

// --- per-lemma inequality checks ----------------------------------------------

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool lower_is_bound = false;  // true: pass iff measured >= bound
    bool pass = false;
};

struct InequalityReport {
    std::vector<CheckRow> checks;
    bool all_pass = true;

    void add(std::string name, double measured, double bound, bool lower_is_bound) {
        CheckRow r;
        r.name = std::move(name);
        r.measured = measured;
        r.bound = bound;
        r.lower_is_bound = lower_is_bound;
        r.pass = lower_is_bound ? measured >= bound : measured <= bound;
        all_pass = all_pass && r.pass;
        checks.push_back(std::move(r));
    }
};

// Appendix-B (Gaussian) and Appendix-D (comb) matrix-element lemmas for one
// lowered basic gate; all measured values come from the hybrid simulator.
inline InequalityReport check_inequalities(const GkpCodeParams& p, MapKind kind, int ell) {
    InequalityReport rep;
    if (kind == MapKind::embed) {
        double dev = 0.0;
        for (const auto& v : embed_overlaps(p)) dev = std::max(dev, std::abs(v - 1.0));
        rep.add("embed_overlap_deviation", dev, 1e-10, false);
        return rep;
    }
    const CMat m = melem_matrix(kind, p, ell);
    const int d = p.d;
    if (kind == MapKind::qcx) {
        double pat_min = 1e300, pat_max = 0.0, off = 0.0, imax = 0.0;
        for (int k = 0; k < d; ++k)
            for (int b = 0; b < 2; ++b)
                for (int j = 0; j < d; ++j)
                    for (int bp = 0; bp < 2; ++bp) {
                        const complex v = m(j * 2 + bp, k * 2 + b);
                        const bool pattern = (bp == b) && (j == (k + b) % d);
                        if (pattern) {
                            pat_min = std::min(pat_min, v.real());
                            pat_max = std::max(pat_max, v.real());
                            imax = std::max(imax, std::abs(v.imag()));
                        } else {
                            off = std::max(off, std::abs(v));
                        }
                    }
        if (p.envelope == Envelope::gaussian) {
            rep.add("qcx_pattern_min", pat_min, 1.0 - p.kappa * p.kappa, true);
        } else {
            rep.add("comb_qcx_pattern_min", pat_min, 1.0 - 2.0 / p.L, true);
        }
        rep.add("qcx_pattern_max", pat_max, 1.0 + 1e-10, false);
        rep.add("qcx_pattern_imag_max", imax, 1e-10, false);
        rep.add("qcx_offpattern_max", off, 1e-10, false);
        return rep;
    }
    if (kind == MapKind::lsb) {
        const double gamma = 2.0 * std::pow(2.0, 2 * ell) * p.delta * p.delta +
                             8.0 * std::pow(p.delta / p.eps, 4);
        double diag_min = 1e300, offdiag_max = 0.0, off = 0.0;
        for (int k = 0; k < d; ++k)
            for (int b = 0; b < 2; ++b)
                for (int j = 0; j < d; ++j)
                    for (int bp = 0; bp < 2; ++bp) {
                        const complex v = m(j * 2 + bp, k * 2 + b);
                        const int j0 = j & 1;
                        if (j == k && bp == (b ^ j0)) {
                            diag_min = std::min(diag_min, v.real());
                        } else if (j == k && bp == (b ^ j0 ^ 1)) {
                            offdiag_max = std::max(offdiag_max, std::abs(v));
                        } else {
                            off = std::max(off, std::abs(v));
                        }
                    }
        rep.add("lsb_diag_min", diag_min, 1.0 - gamma, true);
        rep.add("lsb_offdiag_max", offdiag_max, gamma, false);
        rep.add("lsb_offpattern_max", off, 1e-10, false);
        return rep;
    }
    throw std::invalid_argument("check_inequalities: unsupported map kind");
}

// Momentum-translated comb overlap <Sha, e^{2 pi i z Q} Sha> on the
// integer-spaced base comb, against 1 - 10 z^2 Delta^2 - 16 (Delta/eps)^4.
inline CheckRow comb_momentum_check(double delta, double eps, int L, int z) {
    GkpCodeParams p;
    p.d = 2;  // unused by the base comb itself
    p.delta = delta;
    p.eps = eps;
    p.envelope = Envelope::comb;
    p.L = L;
    const ModeState base = detail::base_comb_envelope(p);
    const complex v = overlap(base, phase_mul(base, 2.0 * M_PI * z));
    CheckRow r;
    r.name = "comb_momentum_z" + std::to_string(z);
    r.measured = v.real();
    r.bound = 1.0 - 10.0 * z * z * delta * delta - 16.0 * std::pow(delta / eps, 4);
    r.lower_is_bound = true;
    r.pass = r.measured >= r.bound;
    return r;
}

// --- report container -----------------------------------------------------------

struct ErrorReport {
    std::string target;
    BoundParams params;
    std::optional<double> corollary_bound;
    AnalyticBound analytic;
    std::optional<BMatrix> b;
    std::vector<CheckRow> checks;
};

inline nlohmann::ordered_json to_json(const CheckRow& r) {
    nlohmann::ordered_json o;
    o["name"] = r.name;
    o["measured"] = r.measured;
    o["bound"] = r.bound;
    o["direction"] = r.lower_is_bound ? ">=" : "<=";
    o["pass"] = r.pass;
    return o;
}

inline nlohmann::ordered_json to_json(const ErrorReport& r) {
    nlohmann::ordered_json o;
    o["schema"] = 1;
    o["target"] = r.target;
    nlohmann::ordered_json pp;
    pp["l"] = r.params.l;
    pp["kappa"] = r.params.kappa;
    pp["delta"] = r.params.delta;
    pp["eps"] = r.params.eps;
    pp["L"] = r.params.L;
    pp["T"] = r.params.T;
    o["params"] = pp;
    if (r.corollary_bound)
        o["corollary_bound"] = *r.corollary_bound;
    else
        o["corollary_bound"] = nullptr;
    o["analytic_bound"] = r.analytic.value;
    o["vacuous"] = r.analytic.vacuous || (r.corollary_bound && *r.corollary_bound >= 2.0);
    o["hypotheses_ok"] = r.analytic.hypotheses_ok;
    if (!r.analytic.note.empty()) o["note"] = r.analytic.note;
    if (r.b) {
        nlohmann::ordered_json bb;
        bb["diag_min"] = r.b->min_diag;
        bb["offdiag_max"] = r.b->max_offdiag;
        bb["sparsity"] = r.b->sparsity;
        bb["diag_imag_max"] = r.b->diag_imag_max;
        bb["largest_discarded"] = r.b->largest_discarded;
        bb["subspace_deviation"] = r.b->subspace_deviation;
        o["B"] = bb;
    }
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    o["checks"] = checks;
    return o;
}

}  // namespace gkpsim
