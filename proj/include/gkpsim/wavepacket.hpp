#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "gkpsim/quadrature.hpp"

namespace gkpsim {

// Truncated Gaussian with a linear phase:
//
//   w(x) = amplitude * e^{i*phase_slope*x} * e^{-(x-center)^2/(2*width^2)}
//
// for x in [lo, hi], zero outside. This family is closed under the gate
// actions e^{-itP} (translate), e^{itQ} (phase_mul) and M_alpha (dilate),
// which is what makes exact circuit simulation possible.
struct Wavepacket {
    std::complex<double> amplitude{1.0, 0.0};
    double center = 0.0;
    double width = 1.0;       // Gaussian scale sigma, > 0
    double lo = -1.0;         // support [lo, hi], lo < hi
    double hi = 1.0;
    double phase_slope = 0.0; // beta in e^{i beta x}

    std::complex<double> value_at(double x) const {
        if (x < lo || x > hi) return {};
        const double u = (x - center) / width;
        return amplitude * std::exp(-0.5 * u * u) *
               std::polar(1.0, phase_slope * x);
    }
};

inline void validate(const Wavepacket& w) {
    if (!(w.width > 0.0)) throw std::invalid_argument("wavepacket: width must be > 0");
    if (!(w.lo < w.hi)) throw std::invalid_argument("wavepacket: empty support");
}

// Action of e^{-itP}: f(x) -> f(x - t). The e^{i beta x} form is kept by
// folding the phase offset e^{-i beta t} into the amplitude.
inline Wavepacket translate(const Wavepacket& w, double t) {
    Wavepacket out = w;
    out.center += t;
    out.lo += t;
    out.hi += t;
    out.amplitude *= std::polar(1.0, -w.phase_slope * t);
    return out;
}

// Action of e^{itQ}: multiply pointwise by e^{itx}.
inline Wavepacket phase_mul(const Wavepacket& w, double t) {
    Wavepacket out = w;
    out.phase_slope += t;
    return out;
}

// Action of the squeezing M_alpha: (M_alpha f)(x) = alpha^{-1/2} f(x/alpha).
inline Wavepacket dilate(const Wavepacket& w, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dilate: alpha must be > 0");
    Wavepacket out = w;
    out.center *= alpha;
    out.width *= alpha;
    out.lo *= alpha;
    out.hi *= alpha;
    out.phase_slope /= alpha;
    out.amplitude /= std::sqrt(alpha);
    return out;
}

inline bool supports_disjoint(const Wavepacket& a, const Wavepacket& b) {
    return std::max(a.lo, b.lo) >= std::min(a.hi, b.hi);
}

// <a, b> = int conj(a(x)) b(x) dx over the support intersection. Disjoint
// supports return exactly 0 with no quadrature. The integrand is a smooth
// Gaussian times a complex exponential, handled by adaptive Gauss-Legendre.
inline std::complex<double> inner_product(const Wavepacket& a, const Wavepacket& b) {
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo >= hi) return {};
    const std::complex<double> pref = std::conj(a.amplitude) * b.amplitude;
    if (pref == std::complex<double>{}) return {};
    const double dbeta = b.phase_slope - a.phase_slope;
    const double ca = a.center, wa = a.width, cb = b.center, wb = b.width;
    auto f = [&](double x) {
        const double ua = (x - ca) / wa;
        const double ub = (x - cb) / wb;
        return std::exp(-0.5 * (ua * ua + ub * ub)) * std::polar(1.0, dbeta * x);
    };
    return pref * integrate_adaptive(f, lo, hi);
}

inline double norm(const Wavepacket& w) {
    return std::sqrt(std::max(0.0, inner_product(w, w).real()));
}

inline bool nearly_equal(double x, double y, double tol = 1e-12) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

// Field-by-field equality at the dedup tolerance (1e-12 relative, absolute
// near zero). Fields come from exact arithmetic on shared inputs, so this
// only has to absorb floating-point noise.
inline bool approx_equal(const Wavepacket& a, const Wavepacket& b, double tol = 1e-12) {
    return nearly_equal(a.center, b.center, tol) && nearly_equal(a.width, b.width, tol) &&
           nearly_equal(a.lo, b.lo, tol) && nearly_equal(a.hi, b.hi, tol) &&
           nearly_equal(a.phase_slope, b.phase_slope, tol) &&
           std::abs(a.amplitude - b.amplitude) <=
               tol * std::max({1.0, std::abs(a.amplitude), std::abs(b.amplitude)});
}

// Packet-identity (ignoring amplitude) for term merging.
inline bool same_shape(const Wavepacket& a, const Wavepacket& b, double tol = 1e-12) {
    return nearly_equal(a.center, b.center, tol) && nearly_equal(a.width, b.width, tol) &&
           nearly_equal(a.lo, b.lo, tol) && nearly_equal(a.hi, b.hi, tol) &&
           nearly_equal(a.phase_slope, b.phase_slope, tol);
}

}  // namespace gkpsim
