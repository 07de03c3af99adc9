#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace sparesat {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline QuadratureRule make_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline QuadratureRule make_gauss_laguerre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p0 = 1.0, p1 = 1.0 - z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0 - z) * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (p1 - p0) / z;  // L_n'(z)
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-14 * std::max(1.0, std::abs(z))) break;
        }
        rule.nodes[i] = z;
        // For alpha = 0: w = -1 / (n * L_n'(z) * L_{n-1}(z)) and L_{n-1}(z) = L_n'(z)*z/n + L_n(z)
        double p0 = 1.0, p1 = 1.0 - z;
        for (int j = 2; j <= n - 1; ++j) {
            const double p2 = ((2.0 * j - 1.0 - z) * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double lnm1 = (n == 1) ? 1.0 : p1;
        rule.weights[i] = -1.0 / (n * pp * lnm1);
    }
    return rule;
}

inline const QuadratureRule& cached_rule(int n, bool laguerre) {
    static std::map<std::pair<int, bool>, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, laguerre);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, laguerre ? make_gauss_laguerre(n) : make_gauss_legendre(n)).first;
    return it->second;
}

}  // namespace detail

// Nodes/weights on [-1, 1].
inline const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    return detail::cached_rule(n, false);
}

// Nodes/weights for integrals of the form \int_0^inf e^{-x} f(x) dx.
inline const QuadratureRule& gauss_laguerre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    return detail::cached_rule(n, true);
}

// \int_lo^hi f via Gauss-Legendre.
template <typename F>
double integrate_interval(F&& f, double lo, double hi, int order) {
    const auto& rule = gauss_legendre(order);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

}  // namespace sparesat
