#pragma once

#include <cmath>
#include <stdexcept>

namespace sparesat {

// Poisson kernels evaluated through PMF recurrences anchored in log space, so they
// stay usable for means far beyond the exp(-mu) underflow point (~745).

inline double poisson_pmf(int k, double mu) {
    if (k < 0) return 0.0;
    if (mu < 0.0) throw std::invalid_argument("poisson mean must be nonnegative");
    if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(mu) - mu - std::lgamma(static_cast<double>(k) + 1.0));
}

// P(D <= k). `eps` is the relative term cutoff for the downward sweep.
inline double poisson_cdf(int k, double mu, double eps = 1e-16) {
    if (k < 0) return 0.0;
    if (mu < 0.0) throw std::invalid_argument("poisson mean must be nonnegative");
    if (mu == 0.0) return 1.0;
    const double sigma = std::sqrt(mu);
    if (static_cast<double>(k) > mu + 45.0 * sigma + 45.0) return 1.0;
    if (static_cast<double>(k) < mu - 45.0 * sigma - 45.0) return 0.0;
    double term = poisson_pmf(k, mu);
    double sum = term;
    for (int d = k; d >= 1; --d) {
        term *= static_cast<double>(d) / mu;  // pmf(d-1) from pmf(d)
        sum += term;
        if (term < eps * sum) break;
    }
    return sum < 1.0 ? sum : 1.0;
}

// E[(D - k)^+] for D ~ Poisson(mu). Accepts k <= 0 (returns mu - k).
inline double poisson_expected_excess(int k, double mu, double eps = 1e-16) {
    if (mu < 0.0) throw std::invalid_argument("poisson mean must be nonnegative");
    if (k <= 0) return mu - static_cast<double>(k);
    if (mu == 0.0) return 0.0;
    const double sigma = std::sqrt(mu);
    if (static_cast<double>(k) > mu + 45.0 * sigma + 45.0) return 0.0;
    if (static_cast<double>(k) < mu - 45.0 * sigma - 45.0)
        return mu - static_cast<double>(k);
    if (static_cast<double>(k) >= mu) {
        // Upward sweep over d > k; every term is nonnegative.
        double term = poisson_pmf(k, mu);
        double sum = 0.0;
        for (int d = k + 1;; ++d) {
            term *= mu / static_cast<double>(d);  // pmf(d) from pmf(d-1)
            const double contrib = term * static_cast<double>(d - k);
            sum += contrib;
            if (contrib < eps * (sum + 1e-300) && d > k + 4) break;
        }
        return sum;
    }
    // E[(D-k)^+] = (mu - k) + E[(k - D)^+]; the second sum runs over d < k.
    double term = poisson_pmf(k - 1, mu);
    double sum = 0.0;
    for (int d = k - 1; d >= 0; --d) {
        const double contrib = term * static_cast<double>(k - d);
        sum += contrib;
        if (contrib < eps * (sum + 1e-300)) break;
        term *= static_cast<double>(d) / mu;
    }
    return (mu - static_cast<double>(k)) + sum;
}

}  // namespace sparesat
