#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace gkpsim {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
// on the Legendre recurrence (cf. the usual gauleg routine).
template <int N>
struct GaussLegendre {
    std::array<double, N> node{};
    std::array<double, N> weight{};

    GaussLegendre() {
        const int m = (N + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < N; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = N * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) < 1e-15) break;
            }
            node[i] = -z;
            node[N - 1 - i] = z;
            weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weight[N - 1 - i] = weight[i];
        }
    }
};

inline const GaussLegendre<32>& gl32() {
    static const GaussLegendre<32> table;
    return table;
}

// Adaptive composite Gauss-Legendre quadrature for complex integrands.
// Order-32 panels, bisected until the panel estimate difference drops below
// rel_tol of the non-cancelling L1 scale of the panel.
template <typename F>
std::complex<double> integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-13) {
    if (!(a < b)) return {};
    const auto& q = gl32();

    auto panel = [&](double lo, double hi, double& l1) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        std::complex<double> s{};
        l1 = 0.0;
        for (int i = 0; i < 32; ++i) {
            const std::complex<double> v = f(mid + half * q.node[i]);
            s += q.weight[i] * v;
            l1 += q.weight[i] * std::abs(v);
        }
        l1 *= half;
        return half * s;
    };

    struct Seg {
        double a, b;
        std::complex<double> est;
        double l1;
        int depth;
    };

    double l1_0 = 0.0;
    std::vector<Seg> stack;
    stack.push_back({a, b, panel(a, b, l1_0), l1_0, 0});

    std::complex<double> total{};
    double floor_scale = std::max(l1_0, 1e-300);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        double l1l = 0.0, l1r = 0.0;
        const std::complex<double> left = panel(s.a, mid, l1l);
        const std::complex<double> right = panel(mid, s.b, l1r);
        const std::complex<double> refined = left + right;
        const double scale = std::max({l1l + l1r, std::abs(refined), 1e-3 * rel_tol * floor_scale});
        if (std::abs(s.est - refined) <= rel_tol * scale || s.depth >= 42) {
            total += refined;
        } else {
            stack.push_back({s.a, mid, left, l1l, s.depth + 1});
            stack.push_back({mid, s.b, right, l1r, s.depth + 1});
        }
    }
    return total;
}

}  // namespace gkpsim
