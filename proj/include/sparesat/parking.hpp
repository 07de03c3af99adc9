#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparesat/poisson.hpp"
#include "sparesat/quadrature.hpp"

namespace sparesat {

// Joint-replenishment (U, S) chain for one parking orbit. States are stock-level
// drops w (batches) with a^T w < U, visited at demand epochs. A demand of
// constellation j moves w -> w + e_j (Outcome 1), resets to 0 when the order fits
// the vehicle (Outcome 2), or to e_j when it does not (Outcome 3).

struct StateSpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Outcome : std::uint8_t { Advance = 1, OrderAll = 2, OrderButLast = 3 };

class MarkovModel {
  public:
    MarkovModel(std::vector<int> batch_slots, int slot_reorder_point, int capacity_slots,
                std::vector<double> demand_rates, std::int64_t state_cap = 5'000'000)
        : a_(std::move(batch_slots)),
          u_(slot_reorder_point),
          capacity_(capacity_slots),
          rates_(std::move(demand_rates)) {
        m_ = static_cast<int>(a_.size());
        if (m_ == 0) throw std::invalid_argument("batch vector must be nonempty");
        if (rates_.size() != a_.size())
            throw std::invalid_argument("demand rate per constellation required");
        for (int aj : a_)
            if (aj < 1) throw std::invalid_argument("batch shipping sizes must be >= 1");
        if (u_ < 1) throw std::invalid_argument("slot reorder point U must be >= 1");
        if (capacity_ < u_) throw std::invalid_argument("capacity A must satisfy U <= A");
        total_rate_ = 0.0;
        for (double r : rates_) {
            if (r < 0.0) throw std::invalid_argument("demand rates must be nonnegative");
            total_rate_ += r;
        }
        if (!(total_rate_ > 0.0)) throw std::invalid_argument("total demand rate must be positive");

        build_count_table();
        const std::int64_t full = count_table_[0][u_ - 1];
        if (full > state_cap)
            throw StateSpaceError("state space has " + std::to_string(full) +
                                  " states, above the cap of " + std::to_string(state_cap));
        pruned_ = !any_outcome2();
        n_states_ = full - (pruned_ ? 1 : 0);
        if (n_states_ == 0)
            throw StateSpaceError(
                "state space is empty: no batch combination can ever ship within capacity");
        enumerate_states();
        build_transitions();
    }

    int m() const { return m_; }
    int slot_reorder_point() const { return u_; }
    int capacity() const { return capacity_; }
    std::int64_t n_states() const { return n_states_; }
    bool zero_state_present() const { return !pruned_; }
    const std::vector<int>& batch_slots() const { return a_; }
    const std::vector<double>& demand_rates() const { return rates_; }
    double total_rate() const { return total_rate_; }

    std::span<const std::int32_t> state(std::int64_t i) const {
        return {states_.data() + i * m_, static_cast<std::size_t>(m_)};
    }
    std::int32_t transition_target(std::int64_t i, int j) const { return target_[i * m_ + j]; }
    Outcome transition_outcome(std::int64_t i, int j) const {
        return static_cast<Outcome>(outcome_[i * m_ + j]);
    }
    double arrival_probability(int j) const { return rates_[j] / total_rate_; }

    // Index of state 0 (or -1 when pruned) followed by the indices of each e_j
    // (-1 when e_j lies outside the state space).
    std::int32_t reset_index(int slot) const { return reset_index_[slot]; }

    // Dense transition matrix; intended for small chains and test oracles.
    Eigen::MatrixXd dense_transition_matrix() const {
        if (n_states_ > 20000)
            throw StateSpaceError("refusing to materialize a dense matrix for " +
                                  std::to_string(n_states_) + " states");
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_states_, n_states_);
        for (std::int64_t i = 0; i < n_states_; ++i)
            for (int j = 0; j < m_; ++j)
                p(i, transition_target(i, j)) += arrival_probability(j);
        return p;
    }

    // Lexicographic rank within the retained state set.
    std::int64_t index_of(std::span<const std::int32_t> w) const {
        std::int64_t rank = 0;
        int budget = u_ - 1;
        for (int i = 0; i < m_; ++i) {
            rank += count(i, budget) - count(i, budget - w[i] * a_[i]);
            budget -= w[i] * a_[i];
            if (budget < 0) throw std::invalid_argument("state outside the state space");
        }
        if (pruned_) {
            if (rank == 0) throw std::invalid_argument("state 0 is pruned from this chain");
            return rank - 1;
        }
        return rank;
    }

  private:
    void build_count_table() {
        // count_table_[i][r] = number of suffix vectors (w_i..w_{m-1}) with sum a_l w_l <= r.
        count_table_.assign(m_ + 1, std::vector<std::int64_t>(u_, 0));
        for (int r = 0; r < u_; ++r) count_table_[m_][r] = 1;
        constexpr std::int64_t kSat = std::numeric_limits<std::int64_t>::max() / 4;
        for (int i = m_ - 1; i >= 0; --i)
            for (int r = 0; r < u_; ++r) {
                std::int64_t acc = 0;
                for (int q = 0; q * a_[i] <= r; ++q)
                    acc = std::min(kSat, acc + count_table_[i + 1][r - q * a_[i]]);
                count_table_[i][r] = acc;
            }
    }

    std::int64_t count(int i, int budget) const {
        return budget < 0 ? 0 : count_table_[i][budget];
    }

    bool any_outcome2() const {
        // Outcome 2 exists iff some reachable slot level L < U has U <= L + a_j <= A.
        std::vector<char> reach(u_, 0);
        reach[0] = 1;
        for (int j = 0; j < m_; ++j)
            for (int r = a_[j]; r < u_; ++r)
                if (reach[r - a_[j]]) reach[r] = 1;
        for (int r = 0; r < u_; ++r) {
            if (!reach[r]) continue;
            for (int j = 0; j < m_; ++j)
                if (r + a_[j] >= u_ && r + a_[j] <= capacity_) return true;
        }
        return false;
    }

    void enumerate_states() {
        states_.reserve(static_cast<std::size_t>(n_states_) * m_);
        std::vector<std::int32_t> w(m_, 0);
        enumerate_rec(w, 0, u_ - 1);
        reset_index_.assign(m_ + 1, -1);
        if (!pruned_) reset_index_[0] = 0;
        for (int j = 0; j < m_; ++j) {
            if (a_[j] > u_ - 1) continue;  // e_j outside the state space
            std::vector<std::int32_t> ej(m_, 0);
            ej[j] = 1;
            reset_index_[j + 1] = static_cast<std::int32_t>(index_of(ej));
        }
    }

    void enumerate_rec(std::vector<std::int32_t>& w, int i, int budget) {
        if (i == m_) {
            if (pruned_ && std::all_of(w.begin(), w.end(), [](auto x) { return x == 0; }))
                return;
            states_.insert(states_.end(), w.begin(), w.end());
            return;
        }
        for (int q = 0; q * a_[i] <= budget; ++q) {
            w[i] = q;
            enumerate_rec(w, i + 1, budget - q * a_[i]);
        }
        w[i] = 0;
    }

    void build_transitions() {
        target_.resize(static_cast<std::size_t>(n_states_) * m_);
        outcome_.resize(static_cast<std::size_t>(n_states_) * m_);
        std::vector<std::int32_t> buf(m_);
        for (std::int64_t i = 0; i < n_states_; ++i) {
            const auto w = state(i);
            int level = 0;
            for (int k = 0; k < m_; ++k) level += w[k] * a_[k];
            for (int j = 0; j < m_; ++j) {
                const int lp = level + a_[j];
                std::int32_t tgt;
                Outcome oc;
                if (lp < u_) {
                    std::copy(w.begin(), w.end(), buf.begin());
                    ++buf[j];
                    tgt = static_cast<std::int32_t>(index_of(buf));
                    oc = Outcome::Advance;
                } else if (lp <= capacity_) {
                    tgt = reset_index_[0];
                    oc = Outcome::OrderAll;
                    if (tgt < 0)
                        throw StateSpaceError("outcome-2 transition found in a pruned chain");
                } else {
                    tgt = reset_index_[j + 1];
                    oc = Outcome::OrderButLast;
                    if (tgt < 0)
                        throw StateSpaceError(
                            "outcome-3 target e_j lies outside the state space (batch size " +
                            std::to_string(a_[j]) + " >= U)");
                }
                target_[i * m_ + j] = tgt;
                outcome_[i * m_ + j] = static_cast<std::uint8_t>(oc);
            }
        }
    }

    std::vector<int> a_;
    int u_;
    int capacity_;
    std::vector<double> rates_;
    double total_rate_ = 0.0;
    int m_ = 0;
    std::int64_t n_states_ = 0;
    bool pruned_ = false;
    std::vector<std::vector<std::int64_t>> count_table_;
    std::vector<std::int32_t> states_;
    std::vector<std::int32_t> target_;
    std::vector<std::uint8_t> outcome_;
    std::vector<std::int32_t> reset_index_;
};

struct StationaryDistribution {
    std::vector<double> probability;               // per state, sums to 1
    std::vector<std::vector<double>> marginal;     // per constellation: P(w_j = omega)
    std::vector<double> mean_drop;                 // E[w_j], batches
    double residual_inf = 0.0;                     // ||P^T w - w||_inf
};

enum class StationaryMethod { CycleDecomposition, Dense };

namespace detail {

// Exact limiting frequencies through cycle decomposition: between order resets every
// transition strictly increases a^T w, so expected visit counts per cycle follow from
// one sweep in level order, and the reset-to-reset map is a tiny Markov chain.
inline std::vector<double> stationary_cycle_decomposition(const MarkovModel& mc) {
    const std::int64_t n = mc.n_states();
    const int m = mc.m();

    std::vector<std::int32_t> order(n);
    {
        std::vector<int> level(n);
        int max_level = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const auto w = mc.state(i);
            int l = 0;
            for (int k = 0; k < m; ++k) l += w[k] * mc.batch_slots()[k];
            level[i] = l;
            max_level = std::max(max_level, l);
        }
        std::vector<std::int64_t> bucket(max_level + 2, 0);
        for (std::int64_t i = 0; i < n; ++i) ++bucket[level[i] + 1];
        for (int l = 0; l <= max_level; ++l) bucket[l + 1] += bucket[l];
        for (std::int64_t i = 0; i < n; ++i) order[bucket[level[i]]++] = static_cast<std::int32_t>(i);
    }

    std::vector<std::int32_t> starts;           // state index per reset slot
    std::vector<int> slot_of(m + 1, -1);        // reset slot -> row in the start list
    for (int s = 0; s <= m; ++s) {
        const std::int32_t idx = mc.reset_index(s);
        if (idx >= 0) {
            slot_of[s] = static_cast<int>(starts.size());
            starts.push_back(idx);
        }
    }
    const int k = static_cast<int>(starts.size());
    if (k == 0) throw StateSpaceError("chain has no reset states");

    std::vector<double> p(m);
    for (int j = 0; j < m; ++j) p[j] = mc.arrival_probability(j);

    Eigen::MatrixXd reset_map = Eigen::MatrixXd::Zero(k, k);
    std::vector<double> cycle_len(k, 0.0);
    std::vector<double> visits(n);

    auto sweep = [&](int row, std::vector<double>* accumulate, double scale) {
        std::fill(visits.begin(), visits.end(), 0.0);
        visits[starts[row]] = 1.0;
        double len = 0.0;
        for (std::int64_t oi = 0; oi < n; ++oi) {
            const std::int32_t i = order[oi];
            const double v = visits[i];
            if (v == 0.0) continue;
            len += v;
            for (int j = 0; j < m; ++j) {
                if (p[j] == 0.0) continue;
                const Outcome oc = mc.transition_outcome(i, j);
                if (oc == Outcome::Advance) {
                    visits[mc.transition_target(i, j)] += v * p[j];
                } else if (accumulate == nullptr) {
                    const int slot = (oc == Outcome::OrderAll) ? 0 : j + 1;
                    reset_map(row, slot_of[slot]) += v * p[j];
                }
            }
        }
        cycle_len[row] = len;
        if (accumulate != nullptr)
            for (std::int64_t i = 0; i < n; ++i) (*accumulate)[i] += scale * visits[i];
    };

    for (int r = 0; r < k; ++r) sweep(r, nullptr, 0.0);

    // Stationary start mix q: q^T reset_map = q^T, sum q = 1.
    Eigen::VectorXd q;
    if (k == 1) {
        q = Eigen::VectorXd::Ones(1);
    } else {
        Eigen::MatrixXd sys = reset_map.transpose() - Eigen::MatrixXd::Identity(k, k);
        sys.row(k - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        rhs(k - 1) = 1.0;
        q = sys.partialPivLu().solve(rhs);
        if (!q.allFinite() || (reset_map.transpose() * q - q).cwiseAbs().maxCoeff() > 1e-9)
            throw StateSpaceError(
                "reset-state fixed point is singular; the chain is not irreducible");
        for (int i = 0; i < k; ++i) q(i) = std::max(q(i), 0.0);
        q /= q.sum();
    }

    double mean_len = 0.0;
    for (int r = 0; r < k; ++r) mean_len += q(r) * cycle_len[r];

    std::vector<double> pi(n, 0.0);
    for (int r = 0; r < k; ++r)
        if (q(r) > 0.0) sweep(r, &pi, q(r) / mean_len);
    return pi;
}

inline std::vector<double> stationary_dense(const MarkovModel& mc) {
    const std::int64_t n = mc.n_states();
    if (n > 20000) throw StateSpaceError("dense stationary solve limited to 2e4 states");
    Eigen::MatrixXd sys = mc.dense_transition_matrix().transpose();
    sys -= Eigen::MatrixXd::Identity(n, n);
    sys.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd x = sys.partialPivLu().solve(rhs);
    if (!x.allFinite())
        throw StateSpaceError("dense stationary solve is singular; chain is not irreducible");
    return {x.data(), x.data() + n};
}

}  // namespace detail

inline StationaryDistribution stationary_distribution(
    const MarkovModel& mc, StationaryMethod method = StationaryMethod::CycleDecomposition) {
    StationaryDistribution dist;
    dist.probability = (method == StationaryMethod::Dense)
                           ? detail::stationary_dense(mc)
                           : detail::stationary_cycle_decomposition(mc);

    const std::int64_t n = mc.n_states();
    const int m = mc.m();
    dist.marginal.assign(m, {});
    for (int j = 0; j < m; ++j) {
        const int max_w = (mc.slot_reorder_point() - 1) / mc.batch_slots()[j];
        dist.marginal[j].assign(max_w + 1, 0.0);
    }
    for (std::int64_t i = 0; i < n; ++i) {
        const auto w = mc.state(i);
        for (int j = 0; j < m; ++j) dist.marginal[j][w[j]] += dist.probability[i];
    }
    dist.mean_drop.assign(m, 0.0);
    for (int j = 0; j < m; ++j)
        for (std::size_t om = 0; om < dist.marginal[j].size(); ++om)
            dist.mean_drop[j] += static_cast<double>(om) * dist.marginal[j][om];

    std::vector<double> flow(n, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            flow[mc.transition_target(i, j)] += dist.probability[i] * mc.arrival_probability(j);
    double res = 0.0;
    for (std::int64_t i = 0; i < n; ++i) res = std::max(res, std::abs(flow[i] - dist.probability[i]));
    dist.residual_inf = res;
    return dist;
}

// Joint orders per time unit for one parking orbit: the stationary order-triggering
// flux. Flow balance at the reset states e_j makes this equal to
// lambda * sum_j pi(e_j) whenever every e_j lies inside the state space.
inline double order_frequency_parking(const MarkovModel& mc, const StationaryDistribution& dist) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < mc.n_states(); ++i)
        for (int j = 0; j < mc.m(); ++j)
            if (mc.transition_outcome(i, j) != Outcome::Advance)
                acc += dist.probability[i] * mc.demand_rates()[j];
    return acc;
}

// Expected batches of each constellation per joint order: stationary order-size flux
// normalized by the order-triggering flux.
inline std::vector<double> expected_order_quantity(const MarkovModel& mc,
                                                   const StationaryDistribution& dist) {
    const int m = mc.m();
    std::vector<double> numer(m, 0.0);
    double denom = 0.0;
    for (std::int64_t i = 0; i < mc.n_states(); ++i) {
        const auto w = mc.state(i);
        for (int j = 0; j < m; ++j) {
            const Outcome oc = mc.transition_outcome(i, j);
            if (oc == Outcome::Advance) continue;
            const double flux = dist.probability[i] * mc.demand_rates()[j];
            for (int jj = 0; jj < m; ++jj) {
                double qty = w[jj];
                if (oc == Outcome::OrderAll && jj == j) qty += 1.0;
                numer[jj] += flux * qty;
            }
            denom += flux;
        }
    }
    if (!(denom > 0.0))
        throw StateSpaceError("no order-triggering flux; the (U, S) policy never orders");
    for (double& x : numer) x /= denom;
    return numer;
}

// Expected backordered batches per order cycle for constellation j, integrating the
// shifted-exponential launch lead time with Gauss-Laguerre.
inline double expected_shortage_parking(int order_up_to, const std::vector<double>& marginal,
                                        double demand_rate, double t_lau, double mu_lau,
                                        int laguerre_order = 32, double eps = 1e-12) {
    if (order_up_to < 1) throw std::invalid_argument("order_up_to must be >= 1");
    if (t_lau < 0.0 || !(mu_lau > 0.0))
        throw std::invalid_argument("launch lead time requires t_lau >= 0 and mu_lau > 0");
    const auto& rule = gauss_laguerre(laguerre_order);
    double acc = 0.0;
    for (std::size_t u = 0; u < rule.nodes.size(); ++u) {
        const double mean = demand_rate * (t_lau + mu_lau * rule.nodes[u]);
        double inner = 0.0;
        for (std::size_t om = 0; om < marginal.size(); ++om) {
            if (marginal[om] == 0.0) continue;
            inner += marginal[om] *
                     poisson_expected_excess(order_up_to - static_cast<int>(om), mean, eps);
        }
        acc += rule.weights[u] * inner;
    }
    return acc;
}

// Mean parking stock (on-hand batches) of constellation j.
inline double mean_stock_parking(int order_up_to, double mean_drop, double demand_rate,
                                 double t_lau, double mu_lau, double expected_shortage) {
    return order_up_to - mean_drop - demand_rate * (t_lau + mu_lau) + expected_shortage;
}

struct FillRate {
    double value = 1.0;  // clamped to [0, 1]
    double raw = 1.0;
    bool clamped = false;
};

inline FillRate fill_rate_parking(double expected_shortage, double expected_quantity) {
    if (!(expected_quantity > 0.0))
        throw std::invalid_argument("expected order quantity must be positive");
    FillRate f;
    f.raw = 1.0 - expected_shortage / expected_quantity;
    f.value = std::clamp(f.raw, 0.0, 1.0);
    f.clamped = f.value != f.raw;
    return f;
}

}  // namespace sparesat
