#pragma once

// Independent brute-force validators. Nothing in this header calls into the
// wavepacket quadrature or the circuit builders: overlaps are computed by
// fixed-grid composite rules on pointwise function descriptions assembled
// directly from the defining formulas, and logical unitaries are assembled
// index-by-index from the defining arithmetic. These are the references the
// engine is certified against.
//
// Gate actions on functional forms are applied analytically via the closed
// transformation rules the definitions force:
//   e^{-itP}: f(x) -> f(x - t)
//   e^{itQ} : f(x) -> e^{itx} f(x)
//   M_alpha : f(x) -> alpha^{-1/2} f(x/alpha)

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gkpsim/gkp_states.hpp"
#include "gkpsim/matrix.hpp"

namespace gkpsim::oracle {

using Fn = std::function<std::complex<double>(double)>;

struct GridSpec {
    double x_min = -10.0;
    double x_max = 10.0;
    long points = 200000;  // >= 1e4; made even internally for simpson
    enum class Rule { trapezoid, simpson } rule = Rule::simpson;
};

inline GridSpec default_grid(double max_support) {
    GridSpec g;
    g.x_min = -max_support - 2.0;
    g.x_max = max_support + 2.0;
    g.points = 200000;
    g.rule = GridSpec::Rule::simpson;
    return g;
}

namespace detail {

inline std::complex<double> composite_rule(const Fn& f, const Fn& g, double x_min, double x_max,
                                           long points, GridSpec::Rule rule) {
    if (points < 2) throw std::invalid_argument("grid_overlap: too few points");
    std::complex<double> acc{};
    if (rule == GridSpec::Rule::trapezoid) {
        const double h = (x_max - x_min) / points;
        for (long i = 0; i <= points; ++i) {
            const double x = x_min + i * h;
            const double w = (i == 0 || i == points) ? 0.5 : 1.0;
            acc += w * std::conj(f(x)) * g(x);
        }
        return acc * h;
    }
    if (points % 2 != 0) ++points;
    const double hs = (x_max - x_min) / points;
    for (long i = 0; i <= points; ++i) {
        const double x = x_min + i * hs;
        const double w = (i == 0 || i == points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * std::conj(f(x)) * g(x);
    }
    return acc * (hs / 3.0);
}

}  // namespace detail

// Composite-rule integral of conj(f) * g with a convergence check: the grid
// is doubled until two consecutive estimates agree to 1e-9. Throws after
// three refinements without agreement.
inline std::complex<double> grid_overlap(const Fn& f, const Fn& g, const GridSpec& spec) {
    if (!(spec.x_min < spec.x_max)) throw std::invalid_argument("grid_overlap: empty grid");
    if (spec.points < 10000) throw std::invalid_argument("grid_overlap: need >= 1e4 points");
    std::complex<double> prev =
        detail::composite_rule(f, g, spec.x_min, spec.x_max, spec.points, spec.rule);
    long n = spec.points;
    for (int attempt = 0; attempt < 3; ++attempt) {
        n *= 2;
        const std::complex<double> cur =
            detail::composite_rule(f, g, spec.x_min, spec.x_max, n, spec.rule);
        if (std::abs(cur - prev) <= 1e-9) return cur;
        prev = cur;
    }
    throw std::runtime_error("grid_overlap: no convergence after 3 refinements");
}

// --- support-aware function descriptions ----------------------------------

// A pointwise function plus its support pieces and a feature-scale hint.
// The pieces let overlaps of states with widely spaced narrow peaks be
// integrated piece by piece instead of on one enormous grid; the hint sets
// the grid resolution (it shrinks when phases are multiplied on).
struct PiecewiseFn {
    Fn f;
    std::vector<std::pair<double, double>> pieces;  // disjoint, sorted
    double min_feature = 1.0;

    std::complex<double> operator()(double x) const { return f(x); }
};

inline PiecewiseFn translated(const PiecewiseFn& p, double t) {
    PiecewiseFn out;
    out.f = [f = p.f, t](double x) { return f(x - t); };
    out.pieces.reserve(p.pieces.size());
    for (auto [a, b] : p.pieces) out.pieces.emplace_back(a + t, b + t);
    out.min_feature = p.min_feature;
    return out;
}

inline PiecewiseFn phase_multiplied(const PiecewiseFn& p, double t) {
    PiecewiseFn out;
    out.f = [f = p.f, t](double x) { return std::polar(1.0, t * x) * f(x); };
    out.pieces = p.pieces;
    out.min_feature = std::min(p.min_feature, 0.5 / std::max(1e-12, std::abs(t)));
    return out;
}

inline PiecewiseFn dilated(const PiecewiseFn& p, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("oracle::dilated: alpha must be > 0");
    PiecewiseFn out;
    const double inv_sqrt = 1.0 / std::sqrt(alpha);
    out.f = [f = p.f, alpha, inv_sqrt](double x) { return inv_sqrt * f(x / alpha); };
    out.pieces.reserve(p.pieces.size());
    for (auto [a, b] : p.pieces) out.pieces.emplace_back(a * alpha, b * alpha);
    out.min_feature = p.min_feature * alpha;
    return out;
}

inline PiecewiseFn scaled(const PiecewiseFn& p, std::complex<double> c) {
    PiecewiseFn out = p;
    out.f = [f = p.f, c](double x) { return c * f(x); };
    return out;
}

// Piecewise Simpson overlap: integrates conj(f)*g over every intersection of
// the two piece lists, with a per-piece grid-doubling convergence check.
inline std::complex<double> piecewise_overlap(const PiecewiseFn& f, const PiecewiseFn& g) {
    std::complex<double> acc{};
    const double mf = std::max(1e-9, std::min(f.min_feature, g.min_feature));
    size_t j0 = 0;
    for (const auto& [fa, fb] : f.pieces) {
        while (j0 < g.pieces.size() && g.pieces[j0].second <= fa) ++j0;
        for (size_t j = j0; j < g.pieces.size() && g.pieces[j].first < fb; ++j) {
            const double a = std::max(fa, g.pieces[j].first);
            const double b = std::min(fb, g.pieces[j].second);
            if (!(a < b)) continue;
            long n = std::clamp<long>(static_cast<long>((b - a) / (mf / 16.0)), 512, 1 << 22);
            std::complex<double> prev =
                detail::composite_rule(f.f, g.f, a, b, n, GridSpec::Rule::simpson);
            for (int attempt = 0;; ++attempt) {
                n *= 2;
                const std::complex<double> cur =
                    detail::composite_rule(f.f, g.f, a, b, n, GridSpec::Rule::simpson);
                if (std::abs(cur - prev) <= 1e-12 || attempt >= 4) {
                    acc += cur;
                    break;
                }
                prev = cur;
            }
        }
    }
    return acc;
}

// Truncated Gaussian with linear phase, straight from its definition.
inline PiecewiseFn packet_fn(std::complex<double> amp, double mu, double sigma, double lo,
                             double hi, double beta) {
    PiecewiseFn p;
    p.f = [=](double x) -> std::complex<double> {
        if (x < lo || x > hi) return {};
        const double u = (x - mu) / sigma;
        return amp * std::exp(-0.5 * u * u) * std::polar(1.0, beta * x);
    };
    p.pieces = {{lo, hi}};
    p.min_feature = std::min(sigma, beta != 0.0 ? 0.5 / std::abs(beta) : sigma);
    return p;
}

// Gaussian-envelope truncated GKP codeword evaluated from the defining sum:
// peaks at sqrt(2 pi/d) j + s sqrt(2 pi d), weight e^{-kappa^2 s^2 / 2},
// exponent e^{-(x - peak)^2/(4 pi d delta^2)} = e^{-(x-peak)^2/(2 sigma^2)}
// with sigma = delta sqrt(2 pi d), support half-width eps*sqrt(2 pi d).
// The normalization is fixed numerically from the definition itself.
inline PiecewiseFn gkp_codeword_fn(const GkpCodeParams& p, int j, int s_cut) {
    const double coarse = std::sqrt(2.0 * M_PI * p.d);
    const double offset = std::sqrt(2.0 * M_PI / p.d) * j;
    const double sigma2 = 4.0 * M_PI * p.d * p.delta * p.delta;
    const double halfw = p.eps * coarse;
    const double kap = p.kappa;
    PiecewiseFn raw;
    raw.f = [=](double x) -> std::complex<double> {
        const double t = (x - offset) / coarse;
        const double s = std::round(t);
        if (std::abs(s) > s_cut) return {};
        const double peak = offset + s * coarse;
        if (std::abs(x - peak) > halfw) return {};
        return std::exp(-0.5 * kap * kap * s * s) * std::exp(-(x - peak) * (x - peak) / sigma2);
    };
    raw.min_feature = std::sqrt(0.5 * sigma2);
    raw.pieces.reserve(2 * s_cut + 1);
    for (int s = -s_cut; s <= s_cut; ++s) {
        const double peak = offset + s * coarse;
        raw.pieces.emplace_back(peak - halfw, peak + halfw);
    }
    const double n2 = piecewise_overlap(raw, raw).real();
    const double inv = 1.0 / std::sqrt(n2);
    return scaled(raw, inv);
}

// Rectangular-envelope codeword: L equal-weight truncated Gaussians at the
// coarse lattice displaced by j fine units, each peak individually
// normalized on its own interval.
inline PiecewiseFn comb_codeword_fn(const GkpCodeParams& p, int j) {
    const double coarse = std::sqrt(2.0 * M_PI * p.d);
    const double offset = std::sqrt(2.0 * M_PI / p.d) * j;
    const double sigma = p.delta * coarse;
    const double halfw = p.eps * coarse;
    const int L = p.L;
    PiecewiseFn peak0 = packet_fn(1.0, 0.0, sigma, -halfw, halfw, 0.0);
    const double pn = std::sqrt(piecewise_overlap(peak0, peak0).real());
    const double amp = 1.0 / (std::sqrt(static_cast<double>(L)) * pn);
    PiecewiseFn out;
    out.f = [=](double x) -> std::complex<double> {
        const double t = (x - offset) / coarse;
        const double z = std::round(t);
        if (z < -L / 2 || z >= L / 2) return {};
        const double peak = offset + z * coarse;
        if (std::abs(x - peak) > halfw) return {};
        const double u = (x - peak) / sigma;
        return amp * std::exp(-0.5 * u * u);
    };
    out.min_feature = sigma;
    out.pieces.reserve(L);
    for (int z = -L / 2; z < L / 2; ++z) {
        const double peak = offset + z * coarse;
        out.pieces.emplace_back(peak - halfw, peak + halfw);
    }
    return out;
}

inline PiecewiseFn vacuum_fn() {
    return packet_fn(std::pow(M_PI, -0.25), 0.0, 1.0, -8.0, 8.0, 0.0);
}

// --- formula-direct logical matrices --------------------------------------

// qCX_l on C^{2^l} (x) C^2, basis index x*2 + b: |x,b> -> |x+b mod 2^l, b>.
inline CMat formula_qcx(int ell) {
    if (ell < 1 || ell > 12) throw std::invalid_argument("formula_qcx: ell out of range");
    const int d = 1 << ell;
    CMat m(2 * d, 2 * d);
    for (int x = 0; x < d; ++x)
        for (int b = 0; b < 2; ++b) m(((x + b) % d) * 2 + b, x * 2 + b) = 1.0;
    return m;
}

// LSB_l: |x,b> -> |x, b xor x_0>.
inline CMat formula_lsb(int ell) {
    if (ell < 1 || ell > 12) throw std::invalid_argument("formula_lsb: ell out of range");
    const int d = 1 << ell;
    CMat m(2 * d, 2 * d);
    for (int x = 0; x < d; ++x)
        for (int b = 0; b < 2; ++b) m(x * 2 + (b ^ (x & 1)), x * 2 + b) = 1.0;
    return m;
}

// Embed_l: C^{2^l} -> C^{2^{l+1}}, |x> -> |2x>.
inline CMat formula_embed(int ell) {
    if (ell < 1 || ell > 12) throw std::invalid_argument("formula_embed: ell out of range");
    const int d = 1 << ell;
    CMat m(2 * d, d);
    for (int x = 0; x < d; ++x) m(2 * x, x) = 1.0;
    return m;
}

// Bit transfer C^j_l X: |x,b> -> |x - 2^j (b xor x_j) mod 2^l, b xor x_j>.
inline CMat formula_bit_transfer(int ell, int j) {
    if (ell < 1 || ell > 12) throw std::invalid_argument("formula_bit_transfer: ell out of range");
    if (j < 0 || j >= ell) throw std::invalid_argument("formula_bit_transfer: j out of range");
    const int d = 1 << ell;
    CMat m(2 * d, 2 * d);
    for (int x = 0; x < d; ++x) {
        for (int b = 0; b < 2; ++b) {
            const int xj = (x >> j) & 1;
            const int bp = b ^ xj;
            const int xp = ((x - (bp << j)) % d + d) % d;
            m(xp * 2 + bp, x * 2 + b) = 1.0;
        }
    }
    return m;
}

// Register split W^l_j: |x> -> |[x_{l-1}..x_j]> (x) |[x_0,...,x_{j-1}]>,
// output index hi * 2^j + rev(lo).
inline CMat formula_register_split(int ell, int j) {
    if (ell < 1 || ell > 12) throw std::invalid_argument("formula_register_split: ell out of range");
    if (j < 0 || j >= ell) throw std::invalid_argument("formula_register_split: j out of range");
    const int d = 1 << ell;
    CMat m(d, d);
    for (int x = 0; x < d; ++x) {
        const int hi = x >> j;
        int rev = 0;
        for (int i = 0; i < j; ++i) rev |= ((x >> i) & 1) << (j - 1 - i);
        m(hi * (1 << j) + rev, x) = 1.0;
    }
    return m;
}

}  // namespace gkpsim::oracle
