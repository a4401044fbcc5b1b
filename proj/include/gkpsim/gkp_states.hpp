#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkpsim/wavepacket.hpp"

namespace gkpsim {

enum class Envelope { gaussian, comb };

// Code-parameter record. A value of this type fully determines a code basis:
//   d        code dimension (>= 2)
//   kappa    envelope squeezing (Gaussian envelope)
//   delta    peak width parameter
//   eps      truncation half-width on the unit lattice, in (0, 1/2)
//   envelope Gaussian or rectangular (comb)
//   L        number of comb peaks (even; ignored for the Gaussian envelope)
struct GkpCodeParams {
    int d = 2;
    double kappa = 0.1;
    double delta = 0.0;
    double eps = 0.25;
    Envelope envelope = Envelope::gaussian;
    int L = 0;
    bool warn_kappa_range = false;  // set when kappa is outside (0, 1/4)
};

// Symmetric preset: delta = kappa/(2 pi d), eps = 1/(2d). Outside
// kappa in (0,1/4) the error bounds downstream may not apply; that is
// flagged, not rejected.
inline GkpCodeParams symmetric_params(double kappa, int d) {
    if (d < 2) throw std::invalid_argument("symmetric_params: d must be >= 2");
    if (!(kappa > 0.0)) throw std::invalid_argument("symmetric_params: kappa must be > 0");
    GkpCodeParams p;
    p.d = d;
    p.kappa = kappa;
    p.delta = kappa / (2.0 * M_PI * d);
    p.eps = 1.0 / (2.0 * d);
    p.envelope = Envelope::gaussian;
    p.L = 0;
    p.warn_kappa_range = !(kappa > 0.0 && kappa < 0.25);
    return p;
}

// Comb envelope width L_{Delta,d} = 2^{2(ceil(log2 1/Delta) - floor(log2 d))},
// defined for Delta < 1/d.
inline int default_L(double delta, int d) {
    if (d < 2) throw std::invalid_argument("default_L: d must be >= 2");
    if (!(delta > 0.0) || !(delta < 1.0 / d))
        throw std::invalid_argument("default_L: requires 0 < delta < 1/d");
    // nudge guards against log2 landing epsilon above an exact integer
    const int up = static_cast<int>(std::ceil(std::log2(1.0 / delta) - 1e-12));
    int down = 0;
    while ((1 << (down + 1)) <= d) ++down;
    const int e = up - down;
    if (e < 1) throw std::invalid_argument("default_L: degenerate exponent");
    return 1 << (2 * e);
}

// Gaussian envelope cutoff: weights e^{-kappa^2 s^2/2} with |s| > S are
// dropped; S = ceil(6/kappa) keeps the truncation error below 1e-7 in
// amplitude.
inline int peak_cutoff(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("peak_cutoff: kappa must be > 0");
    return static_cast<int>(std::ceil(6.0 / kappa));
}

// State of a single oscillator: a finite list of support-ordered packets.
struct ModeState {
    std::vector<Wavepacket> packets;
};

inline ModeState translate(const ModeState& s, double t) {
    ModeState out;
    out.packets.reserve(s.packets.size());
    for (const auto& w : s.packets) out.packets.push_back(translate(w, t));
    return out;
}

inline ModeState phase_mul(const ModeState& s, double t) {
    ModeState out;
    out.packets.reserve(s.packets.size());
    for (const auto& w : s.packets) out.packets.push_back(phase_mul(w, t));
    return out;
}

inline ModeState dilate(const ModeState& s, double alpha) {
    ModeState out;
    out.packets.reserve(s.packets.size());
    for (const auto& w : s.packets) out.packets.push_back(dilate(w, alpha));
    return out;
}

// <a, b> summed over packet pairs with overlapping support. Packets are
// sorted by support so only the overlapping window is visited.
inline std::complex<double> overlap(const ModeState& a, const ModeState& b) {
    std::vector<const Wavepacket*> pa, pb;
    pa.reserve(a.packets.size());
    pb.reserve(b.packets.size());
    for (const auto& w : a.packets) pa.push_back(&w);
    for (const auto& w : b.packets) pb.push_back(&w);
    auto by_lo = [](const Wavepacket* x, const Wavepacket* y) { return x->lo < y->lo; };
    std::sort(pa.begin(), pa.end(), by_lo);
    std::sort(pb.begin(), pb.end(), by_lo);
    std::complex<double> s{};
    size_t jstart = 0;
    for (const auto* wa : pa) {
        while (jstart < pb.size() && pb[jstart]->hi <= wa->lo) ++jstart;
        for (size_t j = jstart; j < pb.size() && pb[j]->lo < wa->hi; ++j)
            s += inner_product(*wa, *pb[j]);
    }
    return s;
}

inline double norm(const ModeState& s) {
    return std::sqrt(std::max(0.0, overlap(s, s).real()));
}

inline std::complex<double> eval(const ModeState& s, double x) {
    std::complex<double> v{};
    for (const auto& w : s.packets) v += w.value_at(x);
    return v;
}

inline ModeState normalized(const ModeState& s) {
    const double n = norm(s);
    if (!(n > 0.0)) throw std::runtime_error("normalized: zero state");
    ModeState out = s;
    for (auto& w : out.packets) w.amplitude /= n;
    return out;
}

namespace detail {

// Integer-centered base states (unit lattice spacing). The codewords are
// produced from these by the squeeze M_{sqrt(2 pi d)} followed by the
// displacement e^{-i sqrt(2 pi/d) j P}, so the construction path is itself
// the gate identity it is later tested against.
inline ModeState base_gaussian_envelope(const GkpCodeParams& p) {
    const int S = peak_cutoff(p.kappa);
    ModeState st;
    st.packets.reserve(2 * S + 1);
    for (int s = -S; s <= S; ++s) {
        Wavepacket w;
        w.amplitude = std::exp(-0.5 * p.kappa * p.kappa * s * s);
        w.center = s;
        w.width = p.delta;
        w.lo = s - p.eps;
        w.hi = s + p.eps;
        w.phase_slope = 0.0;
        st.packets.push_back(w);
    }
    return normalized(st);
}

inline ModeState base_comb_envelope(const GkpCodeParams& p) {
    Wavepacket ref;
    ref.amplitude = 1.0;
    ref.center = 0.0;
    ref.width = p.delta;
    ref.lo = -p.eps;
    ref.hi = p.eps;
    const double packet_norm = norm(ref);
    ModeState st;
    st.packets.reserve(p.L);
    for (int z = -p.L / 2; z < p.L / 2; ++z) {
        Wavepacket w = ref;
        w.amplitude = 1.0 / (std::sqrt(static_cast<double>(p.L)) * packet_norm);
        w.center = z;
        w.lo = z - p.eps;
        w.hi = z + p.eps;
        st.packets.push_back(w);
    }
    return st;
}

inline void check_codeword_args(const GkpCodeParams& p, int j, bool require_orthogonal) {
    if (p.d < 2) throw std::invalid_argument("codeword: d must be >= 2");
    if (j < 0 || j >= p.d) throw std::invalid_argument("codeword: j out of range");
    if (!(p.delta > 0.0)) throw std::invalid_argument("codeword: delta must be > 0");
    if (!(p.eps > 0.0 && p.eps < 0.5)) throw std::invalid_argument("codeword: eps must be in (0, 1/2)");
    if (require_orthogonal && p.eps > 1.0 / (2.0 * p.d))
        throw std::invalid_argument("codeword: eps must satisfy eps <= 1/(2d) (orthogonality)");
}

// Codeword of the 2d-dimensional family with the source family's eps, as
// produced exactly by the embedding squeeze. Only the even sublattice is
// pairwise orthogonal at this eps, which is all the embedding uses.
inline ModeState make_codeword_relaxed(const GkpCodeParams& p, int j) {
    check_codeword_args(p, j, /*require_orthogonal=*/false);
    const ModeState base = p.envelope == Envelope::gaussian ? base_gaussian_envelope(p)
                                                            : base_comb_envelope(p);
    return translate(dilate(base, std::sqrt(2.0 * M_PI * p.d)), std::sqrt(2.0 * M_PI / p.d) * j);
}

}  // namespace detail

// Gaussian-envelope truncated codeword: peaks at sqrt(2 pi/d) j + s sqrt(2 pi d)
// with weights e^{-kappa^2 s^2/2}, peak sigma delta*sqrt(2 pi d), support
// half-width eps*sqrt(2 pi d).
//
// The peak exponent in the defining formula is e^{-(x - sqrt(2pi/d) j)^2/(4 pi d delta^2)}
// = e^{-(x - ...)^2 / (2 (delta sqrt(2 pi d))^2)}, i.e. the position-space
// sigma is delta*sqrt(2 pi d); it enters here through the dilation of the
// unit-lattice base state.
inline ModeState make_gkp_codeword(const GkpCodeParams& p, int j) {
    if (p.envelope != Envelope::gaussian)
        throw std::invalid_argument("make_gkp_codeword: gaussian envelope required");
    if (!(p.kappa > 0.0)) throw std::invalid_argument("make_gkp_codeword: kappa must be > 0");
    detail::check_codeword_args(p, j, /*require_orthogonal=*/true);
    const ModeState base = detail::base_gaussian_envelope(p);
    return translate(dilate(base, std::sqrt(2.0 * M_PI * p.d)), std::sqrt(2.0 * M_PI / p.d) * j);
}

// Rectangular-envelope (comb) codeword: L equal-weight packets, each
// individually normalized, at the coarse lattice displaced by j fine units.
inline ModeState make_comb_codeword(const GkpCodeParams& p, int j) {
    if (p.envelope != Envelope::comb)
        throw std::invalid_argument("make_comb_codeword: comb envelope required");
    if (p.L < 2 || p.L % 2 != 0) throw std::invalid_argument("make_comb_codeword: L must be even and >= 2");
    detail::check_codeword_args(p, j, /*require_orthogonal=*/true);
    const ModeState base = detail::base_comb_envelope(p);
    return translate(dilate(base, std::sqrt(2.0 * M_PI * p.d)), std::sqrt(2.0 * M_PI / p.d) * j);
}

inline ModeState make_codeword(const GkpCodeParams& p, int j) {
    return p.envelope == Envelope::gaussian ? make_gkp_codeword(p, j) : make_comb_codeword(p, j);
}

inline std::vector<ModeState> code_basis(const GkpCodeParams& p) {
    std::vector<ModeState> basis;
    basis.reserve(p.d);
    for (int j = 0; j < p.d; ++j) basis.push_back(make_codeword(p, j));
    return basis;
}

// Truncated vacuum: pi^{-1/4} e^{-x^2/2} restricted to [-8, 8], renormalized.
inline ModeState make_vacuum() {
    Wavepacket w;
    w.amplitude = std::pow(M_PI, -0.25);
    w.center = 0.0;
    w.width = 1.0;
    w.lo = -8.0;
    w.hi = 8.0;
    w.phase_slope = 0.0;
    ModeState st;
    st.packets.push_back(w);
    return normalized(st);
}

// CSV wavefunction dump: one comment header line recording the parameters,
// then rows (x, Re psi, Im psi) on a uniform grid.
inline void dump_wavefunction_csv(std::ostream& os, const ModeState& s, const GkpCodeParams& p,
                                  int j, double x_min, double x_max, long points) {
    if (!(x_min < x_max) || points < 2) throw std::invalid_argument("dump_wavefunction_csv: bad grid");
    os << "# schema=1,d=" << p.d << ",kappa=" << p.kappa << ",delta=" << p.delta
       << ",eps=" << p.eps << ",envelope=" << (p.envelope == Envelope::gaussian ? "gaussian" : "comb")
       << ",L=" << p.L << ",j=" << j << ",x_min=" << x_min << ",x_max=" << x_max
       << ",points=" << points << "\n";
    os << "x,re_psi,im_psi\n";
    const double dx = (x_max - x_min) / (points - 1);
    os.precision(17);
    for (long i = 0; i < points; ++i) {
        const double x = x_min + i * dx;
        const auto v = eval(s, x);
        os << x << "," << v.real() << "," << v.imag() << "\n";
    }
}

}  // namespace gkpsim
