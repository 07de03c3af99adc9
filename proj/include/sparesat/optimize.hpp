#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sparesat/evaluate.hpp"

namespace sparesat {

struct IntBound {
    int lo = 0, hi = 0;
};

// Integer design space. batch_size bounds of {lo, 0} mean "1 .. floor(A / v_j)".
struct DesignBounds {
    std::vector<double> parking_altitudes_km;  // admissible discrete set
    IntBound n_parking{1, 20};
    IntBound slot_reorder_point{1, 1};
    std::vector<IntBound> reorder_point;  // per constellation
    std::vector<IntBound> batch_size;
    std::vector<IntBound> order_up_to;

    void validate(std::size_t m) const {
        if (parking_altitudes_km.empty())
            throw std::invalid_argument("parking altitude set must be nonempty");
        if (reorder_point.size() != m || batch_size.size() != m || order_up_to.size() != m)
            throw std::invalid_argument("per-constellation bounds size mismatch");
    }
};

struct GaOptions {
    int population = 100;
    std::int64_t budget = 20000;  // candidate evaluations
    std::uint64_t seed = 1;
    double crossover_prob = 0.9;
    int threads = 1;
    EvalOptions eval;
};

struct OptimizeLogRow {
    int generation = 0;
    std::int64_t evaluations = 0;
    double best_tessac = 0.0;
    bool has_feasible = false;
    double best_violation = 0.0;
};

namespace detail {

struct Genome {
    std::vector<int> g;       // [h_idx, n_parking, U, (s, Q, S) per j]
    std::vector<double> y;    // launch cost fraction genes (decentralized only)
};

struct EvalRecord {
    bool structural_ok = false;
    bool feasible = false;
    double violation = std::numeric_limits<double>::infinity();
    double tessac = std::numeric_limits<double>::infinity();
    double launch_total = 0.0;
    std::vector<double> cost_wo_launch;  // C_j per constellation
};

class CandidateEvaluator {
  public:
    CandidateEvaluator(const ScenarioParams& params, const DesignBounds& bounds,
                       const EvalOptions& opts)
        : params_(params), bounds_(bounds), opts_(opts) {
        m_ = static_cast<int>(params.m());
    }

    int genome_length() const { return 3 + 3 * m_; }

    StrategyDesign decode(const Genome& genome) const {
        StrategyDesign d;
        d.shared.parking_altitude_km = bounds_.parking_altitudes_km[genome.g[0]];
        d.shared.n_parking = genome.g[1];
        d.shared.slot_reorder_point = genome.g[2];
        d.inplane.resize(m_);
        d.order_up_to.resize(m_);
        for (int j = 0; j < m_; ++j) {
            d.inplane[j].reorder_point = genome.g[3 + 3 * j];
            d.inplane[j].batch_size = genome.g[4 + 3 * j];
            d.order_up_to[j] = genome.g[5 + 3 * j];
        }
        if (!genome.y.empty()) d.launch_cost_fractions = normalized_fractions(genome.y);
        return d;
    }

    std::vector<double> normalized_fractions(const std::vector<double>& y) const {
        std::vector<double> f(y);
        double sum = 0.0;
        for (double& v : f) {
            v = std::max(v, 0.0);
            sum += v;
        }
        if (sum <= 0.0) {
            f.assign(m_, 1.0 / m_);
        } else {
            for (double& v : f) v /= sum;
        }
        return f;
    }

    int batch_hi(int j) const {
        const int from_bounds = bounds_.batch_size[j].hi;
        const int from_capacity =
            params_.launcher.capacity_slots / params_.constellations[j].shipping_size_slots;
        return from_bounds > 0 ? std::min(from_bounds, from_capacity) : from_capacity;
    }

    // Structural repair: clamp to bounds, then conditions 3, 1, 2 in that order.
    void repair(Genome& genome) const {
        auto clampi = [](int v, int lo, int hi) { return std::min(std::max(v, lo), hi); };
        genome.g[0] = clampi(genome.g[0], 0,
                             static_cast<int>(bounds_.parking_altitudes_km.size()) - 1);
        genome.g[1] = clampi(genome.g[1], bounds_.n_parking.lo, bounds_.n_parking.hi);
        const int u_hi = std::min(bounds_.slot_reorder_point.hi, params_.launcher.capacity_slots);
        genome.g[2] = clampi(genome.g[2], bounds_.slot_reorder_point.lo, u_hi);
        int max_batch_slots = 0;
        for (int j = 0; j < m_; ++j) {
            const int v = params_.constellations[j].shipping_size_slots;
            int q = clampi(genome.g[4 + 3 * j], bounds_.batch_size[j].lo, batch_hi(j));
            if (static_cast<long>(v) * q + 1 > u_hi) q = std::max((u_hi - 1) / v, 1);
            genome.g[4 + 3 * j] = q;
            max_batch_slots = std::max(max_batch_slots, v * q);
            int s = clampi(genome.g[3 + 3 * j], bounds_.reorder_point[j].lo,
                           bounds_.reorder_point[j].hi);
            genome.g[3 + 3 * j] = std::min(s, q);  // condition 1
            genome.g[5 + 3 * j] =
                clampi(genome.g[5 + 3 * j], bounds_.order_up_to[j].lo, bounds_.order_up_to[j].hi);
        }
        if (max_batch_slots + 1 > genome.g[2])
            genome.g[2] = clampi(max_batch_slots + 1, bounds_.slot_reorder_point.lo, u_hi);
        // Condition 2: raise order-up-to levels (largest batch first) until covered.
        long deficit = genome.g[2];
        for (int j = 0; j < m_; ++j)
            deficit -= static_cast<long>(genome.g[5 + 3 * j]) *
                       params_.constellations[j].shipping_size_slots * genome.g[4 + 3 * j];
        if (deficit > 0) {
            std::vector<int> order(m_);
            for (int j = 0; j < m_; ++j) order[j] = j;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const int sa = params_.constellations[a].shipping_size_slots * genome.g[4 + 3 * a];
                const int sb = params_.constellations[b].shipping_size_slots * genome.g[4 + 3 * b];
                return sa > sb;
            });
            for (int j : order) {
                const int slots =
                    params_.constellations[j].shipping_size_slots * genome.g[4 + 3 * j];
                while (deficit > 0 && genome.g[5 + 3 * j] < bounds_.order_up_to[j].hi) {
                    ++genome.g[5 + 3 * j];
                    deficit -= slots;
                }
                if (deficit <= 0) break;
            }
        }
    }

    // Lamarckian repair: structural conditions first, then the service conditions by
    // raising s_j / S_j to the smallest feasible levels at or above the gene values.
    // Fill rates are monotone in both, and with the chain summary cached the marginal
    // checks are cheap, so constructive repair replaces the death penalty.
    void full_repair(Genome& genome) {
        repair(genome);
        const double req = params_.fill_rate_requirement;
        if (req <= 0.0) return;
        const ChainSummary* cs = chain_summary_for(genome);
        if (cs == nullptr) return;  // oversized state space; evaluation will flag it
        for (int j = 0; j < m_; ++j) {
            // Order-up-to level for the parking fill rate.
            const int s_hi = bounds_.order_up_to[j].hi;
            int lo = genome.g[5 + 3 * j], hi = s_hi;
            if (rho_parking_at(*cs, j, lo) < req) {
                if (rho_parking_at(*cs, j, hi) < req) {
                    genome.g[5 + 3 * j] = hi;
                } else {
                    while (lo < hi) {  // smallest feasible level
                        const int mid = lo + (hi - lo) / 2;
                        if (rho_parking_at(*cs, j, mid) < req)
                            lo = mid + 1;
                        else
                            hi = mid;
                    }
                    genome.g[5 + 3 * j] = lo;
                }
            }
        }
        for (int j = 0; j < m_; ++j) {
            // Reorder point for the in-plane fill rate, capped by condition 1.
            const double rho_pk =
                std::clamp(rho_parking_at(*cs, j, genome.g[5 + 3 * j]), 1e-9, 1.0);
            const LeadTimeMixture mix = mixture_for(genome, j, rho_pk);
            const int q = genome.g[4 + 3 * j];
            const double lambda = plane_demand_rate(params_.constellations[j], params_.n_t);
            auto rho_plane_at = [&](int s) {
                return fill_rate_plane(
                    q, expected_shortage_plane(s, lambda, mix, opts_.plane_quad_order,
                                               opts_.tail_eps));
            };
            int lo = genome.g[3 + 3 * j];
            int hi = std::min(bounds_.reorder_point[j].hi, q);
            if (lo < hi && rho_plane_at(lo) < req) {
                if (rho_plane_at(hi) < req) {
                    genome.g[3 + 3 * j] = hi;
                } else {
                    while (lo < hi) {
                        const int mid = lo + (hi - lo) / 2;
                        if (rho_plane_at(mid) < req)
                            lo = mid + 1;
                        else
                            hi = mid;
                    }
                    genome.g[3 + 3 * j] = lo;
                }
            }
        }
    }

    // Evaluate through the cache; launch-cost fractions never enter the key. Only
    // cache misses run the model and count against the evaluation budget.
    EvalRecord evaluate_candidate(const Genome& genome, bool* was_miss = nullptr) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(genome.g);
            if (it != cache_.end()) {
                if (was_miss != nullptr) *was_miss = false;
                return it->second;
            }
        }
        EvalRecord rec = evaluate_uncached(genome);
        if (was_miss != nullptr) *was_miss = true;
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(genome.g, rec);
        return rec;
    }

    const ScenarioParams& params() const { return params_; }

  private:
    struct ChainSummary {
        double n_parking = 0.0;
        std::vector<double> rates;
        std::vector<double> eq;
        std::vector<double> mean_drop;
        std::vector<std::vector<double>> marginal;
    };

    // Chain solve shared across every candidate with the same (N_parking, U, Q).
    const ChainSummary* chain_summary_for(const Genome& genome) {
        std::vector<int> key(2 + m_);
        key[0] = genome.g[1];
        key[1] = genome.g[2];
        for (int j = 0; j < m_; ++j) key[2 + j] = genome.g[4 + 3 * j];
        {
            std::lock_guard<std::mutex> lock(chain_mutex_);
            auto it = chains_.find(key);
            if (it != chains_.end()) return it->second ? &*it->second : nullptr;
        }
        std::optional<ChainSummary> summary;
        try {
            std::vector<int> batch_slots(m_);
            std::vector<double> rates(m_);
            for (int j = 0; j < m_; ++j) {
                batch_slots[j] =
                    params_.constellations[j].shipping_size_slots * genome.g[4 + 3 * j];
                rates[j] = parking_demand_rate(params_.constellations[j], genome.g[1],
                                               genome.g[4 + 3 * j], params_.n_t);
            }
            const MarkovModel chain(batch_slots, genome.g[2], params_.launcher.capacity_slots,
                                    rates, opts_.state_cap);
            const StationaryDistribution dist = stationary_distribution(chain);
            ChainSummary cs;
            cs.n_parking = order_frequency_parking(chain, dist);
            cs.rates = rates;
            cs.eq = expected_order_quantity(chain, dist);
            cs.mean_drop = dist.mean_drop;
            cs.marginal = dist.marginal;
            summary = std::move(cs);
        } catch (const StateSpaceError&) {
            summary.reset();
        }
        std::lock_guard<std::mutex> lock(chain_mutex_);
        auto [it, inserted] = chains_.emplace(std::move(key), std::move(summary));
        return it->second ? &*it->second : nullptr;
    }

    double rho_parking_at(const ChainSummary& cs, int j, int order_up_to) {
        const double es = expected_shortage_parking(
            order_up_to, cs.marginal[j], cs.rates[j], params_.launcher.order_processing_time,
            params_.launcher.mean_wait, opts_.laguerre_order, opts_.tail_eps);
        return fill_rate_parking(es, cs.eq[j]).value;
    }

    LeadTimeMixture mixture_for(const Genome& genome, int j, double rho_parking) const {
        SharedDesign shared{bounds_.parking_altitudes_km[genome.g[0]], genome.g[1],
                            genome.g[2]};
        return leadtime_mixture(params_.constellations[j], shared, params_.inclination_deg,
                                params_.n_t, rho_parking, params_.constants);
    }

    EvalRecord evaluate_uncached(const Genome& genome) {
        EvalRecord rec;
        const StrategyDesign design = [&] {
            auto d = decode(genome);
            d.launch_cost_fractions.clear();
            return d;
        }();
        // Residual structural violations (possible only under impossible bounds).
        double structural = 0.0;
        for (int j = 0; j < m_; ++j) {
            const long a_j = static_cast<long>(params_.constellations[j].shipping_size_slots) *
                             design.inplane[j].batch_size;
            if (a_j + 1 > design.shared.slot_reorder_point)
                structural += static_cast<double>(a_j + 1 - design.shared.slot_reorder_point);
            if (design.inplane[j].reorder_point > design.inplane[j].batch_size)
                structural += 1.0;
        }
        long oul = 0;
        for (int j = 0; j < m_; ++j)
            oul += static_cast<long>(design.order_up_to[j]) *
                   params_.constellations[j].shipping_size_slots * design.inplane[j].batch_size;
        if (oul < design.shared.slot_reorder_point)
            structural += static_cast<double>(design.shared.slot_reorder_point - oul);
        for (const auto& c : params_.constellations)
            if (design.shared.parking_altitude_km >= c.plane_altitude_km) structural += 1.0;
        if (structural > 0.0) {
            rec.structural_ok = false;
            rec.violation = 1e6 + structural;
            return rec;
        }
        rec.structural_ok = true;

        const ChainSummary* cs = chain_summary_for(genome);
        if (cs == nullptr) {
            rec.structural_ok = false;
            rec.violation = 1e6;
            return rec;
        }

        const double req = params_.fill_rate_requirement;
        double violation = 0.0;
        std::vector<double> hold(m_), man(m_), mfg(m_);
        for (int j = 0; j < m_; ++j) {
            const auto& c = params_.constellations[j];
            const auto& pol = design.inplane[j];
            const double es_pk = expected_shortage_parking(
                design.order_up_to[j], cs->marginal[j], cs->rates[j],
                params_.launcher.order_processing_time, params_.launcher.mean_wait,
                opts_.laguerre_order, opts_.tail_eps);
            const FillRate rho_pk = fill_rate_parking(es_pk, cs->eq[j]);
            violation += std::max(0.0, req - rho_pk.value);
            const double sl_pk = mean_stock_parking(design.order_up_to[j], cs->mean_drop[j],
                                                    cs->rates[j],
                                                    params_.launcher.order_processing_time,
                                                    params_.launcher.mean_wait, es_pk);

            const LeadTimeMixture mix =
                mixture_for(genome, j, std::clamp(rho_pk.value, 1e-9, 1.0));
            const double lambda = plane_demand_rate(c, params_.n_t);
            const double es_pl = expected_shortage_plane(pol.reorder_point, lambda, mix,
                                                         opts_.plane_quad_order, opts_.tail_eps);
            const double rho_pl = fill_rate_plane(pol.batch_size, es_pl);
            violation += std::max(0.0, req - rho_pl);
            const double sl_pl = mean_stock_plane(pol.reorder_point, pol.batch_size, lambda,
                                                  mix, opts_.plane_quad_order);

            const CircularOrbit parking{design.shared.parking_altitude_km,
                                        params_.inclination_deg};
            const CircularOrbit plane{c.plane_altitude_km, params_.inclination_deg};
            const double dv = transfer_delta_v(parking.radius_km(params_.constants),
                                               plane.radius_km(params_.constants),
                                               params_.constants);
            const double fuel = fuel_mass(dv, c.propulsion());
            hold[j] = holding_cost(c, sl_pl, sl_pk, pol.batch_size, design.shared.n_parking);
            man[j] = maneuvering_cost(c, fuel, order_frequency_plane(lambda, pol.batch_size),
                                      pol.batch_size, params_.n_t);
            mfg[j] = manufacturing_cost(c);
        }
        const double c_lau = launch_cost_annual(params_.launcher, cs->n_parking,
                                                design.shared.n_parking, params_.n_t);
        rec.violation = violation;
        rec.feasible = violation == 0.0;
        rec.launch_total = c_lau;
        rec.cost_wo_launch.resize(m_);
        rec.tessac = c_lau;
        for (int j = 0; j < m_; ++j) {
            rec.cost_wo_launch[j] = hold[j] + man[j] + mfg[j];
            rec.tessac += rec.cost_wo_launch[j];
        }
        return rec;
    }

    const ScenarioParams& params_;
    const DesignBounds& bounds_;
    EvalOptions opts_;
    int m_ = 0;
    std::map<std::vector<int>, EvalRecord> cache_;
    std::mutex mutex_;
    std::map<std::vector<int>, std::optional<ChainSummary>> chains_;
    std::mutex chain_mutex_;
};

// Returns the number of cache misses (true model evaluations).
inline std::int64_t batch_evaluate(CandidateEvaluator& ev, std::vector<Genome>& pop,
                                   std::vector<EvalRecord>& recs, int threads) {
    recs.resize(pop.size());
    std::vector<char> miss(pop.size(), 0);
    if (threads <= 1) {
        for (std::size_t i = 0; i < pop.size(); ++i) {
            bool m = false;
            recs[i] = ev.evaluate_candidate(pop[i], &m);
            miss[i] = m;
        }
    } else {
        std::vector<std::thread> workers;
        const int n = std::min<int>(threads, static_cast<int>(pop.size()));
        for (int t = 0; t < n; ++t)
            workers.emplace_back([&, t] {
                for (std::size_t i = t; i < pop.size(); i += n) {
                    bool m = false;
                    recs[i] = ev.evaluate_candidate(pop[i], &m);
                    miss[i] = m;
                }
            });
        for (auto& w : workers) w.join();
    }
    std::int64_t misses = 0;
    for (char m : miss) misses += m;
    return misses;
}

inline Genome random_genome(std::mt19937_64& rng, const CandidateEvaluator& ev,
                            const DesignBounds& bounds, int m, bool with_fractions) {
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    Genome g;
    g.g.resize(3 + 3 * m);
    g.g[0] = pick(0, static_cast<int>(bounds.parking_altitudes_km.size()) - 1);
    g.g[1] = pick(bounds.n_parking.lo, bounds.n_parking.hi);
    g.g[2] = pick(bounds.slot_reorder_point.lo, bounds.slot_reorder_point.hi);
    for (int j = 0; j < m; ++j) {
        g.g[3 + 3 * j] = pick(bounds.reorder_point[j].lo, bounds.reorder_point[j].hi);
        g.g[4 + 3 * j] = pick(bounds.batch_size[j].lo, ev.batch_hi(j));
        g.g[5 + 3 * j] = pick(bounds.order_up_to[j].lo, bounds.order_up_to[j].hi);
    }
    if (with_fractions) {
        g.y.resize(m);
        for (double& v : g.y) v = (rng() >> 11) * 0x1.0p-53;
    }
    return g;
}

// Per-gene mutation at rate 1/length; integer genes take either a uniform reset or a
// small creep step (the cost surface is locally smooth in s, Q, S and U).
inline void mutate(Genome& g, std::mt19937_64& rng, const CandidateEvaluator& ev,
                   const DesignBounds& bounds, int m) {
    const int len = static_cast<int>(g.g.size() + g.y.size());
    const double rate = 1.0 / len;
    auto uni = [&] { return (rng() >> 11) * 0x1.0p-53; };
    auto chance = [&] { return uni() < rate; };
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    auto jiggle = [&](int value, int lo, int hi) {
        if (uni() < 0.5) return pick(lo, hi);
        const int step = 1 + static_cast<int>(rng() % 3);
        const int moved = (rng() & 1ULL) ? value + step : value - step;
        return std::clamp(moved, lo, hi);
    };
    if (chance()) g.g[0] = jiggle(g.g[0], 0, static_cast<int>(bounds.parking_altitudes_km.size()) - 1);
    if (chance()) g.g[1] = jiggle(g.g[1], bounds.n_parking.lo, bounds.n_parking.hi);
    if (chance()) g.g[2] = jiggle(g.g[2], bounds.slot_reorder_point.lo, bounds.slot_reorder_point.hi);
    for (int j = 0; j < m; ++j) {
        if (chance())
            g.g[3 + 3 * j] = jiggle(g.g[3 + 3 * j], bounds.reorder_point[j].lo,
                                    bounds.reorder_point[j].hi);
        if (chance())
            g.g[4 + 3 * j] = jiggle(g.g[4 + 3 * j], bounds.batch_size[j].lo, ev.batch_hi(j));
        if (chance())
            g.g[5 + 3 * j] = jiggle(g.g[5 + 3 * j], bounds.order_up_to[j].lo,
                                    bounds.order_up_to[j].hi);
    }
    if (chance()) {
        // Correlated move: shift every batch size together. Basins often differ in the
        // common batch scale, which per-gene steps cannot cross.
        const int step = 1 + static_cast<int>(rng() % 3);
        const int delta = (rng() & 1ULL) ? step : -step;
        for (int j = 0; j < m; ++j)
            g.g[4 + 3 * j] =
                std::clamp(g.g[4 + 3 * j] + delta, bounds.batch_size[j].lo, ev.batch_hi(j));
    }
    for (double& v : g.y)
        if (chance()) v = uni();
}

inline std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b,
                                                   std::mt19937_64& rng, double prob) {
    Genome c1 = a, c2 = b;
    if ((rng() >> 11) * 0x1.0p-53 >= prob) return {c1, c2};
    for (std::size_t i = 0; i < c1.g.size(); ++i)
        if (rng() & 1ULL) std::swap(c1.g[i], c2.g[i]);
    for (std::size_t i = 0; i < c1.y.size(); ++i)
        if (rng() & 1ULL) std::swap(c1.y[i], c2.y[i]);
    return {c1, c2};
}

}  // namespace detail

struct CentralizedResult {
    StrategyDesign best;
    bool feasible = false;
    double violation = std::numeric_limits<double>::infinity();
    double tessac = std::numeric_limits<double>::infinity();
    std::optional<EvaluationResult> evaluation;
    std::vector<OptimizeLogRow> log;
    std::int64_t evaluations_used = 0;
};

// Single-objective GA over the integer design space, minimizing total TESSAC.
// Structural conditions are repaired; service conditions use a death penalty.
inline CentralizedResult optimize_centralized(const ScenarioParams& params,
                                              const DesignBounds& bounds,
                                              const GaOptions& opts = {}) {
    params.validate();
    bounds.validate(params.m());
    if (opts.budget < opts.population)
        throw std::invalid_argument("budget must be at least the population size");
    const int m = static_cast<int>(params.m());
    detail::CandidateEvaluator evaluator(params, bounds, opts.eval);
    std::mt19937_64 rng(opts.seed ^ 0xce47a111ULL);

    // Feasible candidates rank by cost. Infeasible ones rank strictly behind all
    // feasible costs yet stay ordered by cost-plus-violation, so selection can walk
    // across thin service-constraint ridges between basins.
    auto fitness = [](const detail::EvalRecord& r) {
        if (!r.structural_ok) return 1e12 * (1.0 + r.violation);
        if (!r.feasible) {
            const double base = std::isfinite(r.tessac) ? r.tessac : 1e7;
            return 1e6 + base + 3e4 * r.violation;
        }
        return r.tessac;
    };

    std::vector<detail::Genome> pop(opts.population);
    for (auto& g : pop) {
        g = detail::random_genome(rng, evaluator, bounds, m, false);
        evaluator.full_repair(g);
    }
    std::vector<detail::EvalRecord> recs;
    std::int64_t used = detail::batch_evaluate(evaluator, pop, recs, opts.threads);

    CentralizedResult out;
    int best_idx = 0;
    for (int i = 1; i < opts.population; ++i)
        if (fitness(recs[i]) < fitness(recs[best_idx])) best_idx = i;
    detail::Genome best_genome = pop[best_idx];
    detail::EvalRecord best_rec = recs[best_idx];

    auto log_row = [&](int gen) {
        OptimizeLogRow row;
        row.generation = gen;
        row.evaluations = used;
        row.has_feasible = best_rec.feasible;
        row.best_tessac = best_rec.feasible ? best_rec.tessac
                                            : std::numeric_limits<double>::infinity();
        row.best_violation = best_rec.feasible ? 0.0 : best_rec.violation;
        out.log.push_back(row);
    };
    log_row(0);

    auto tournament = [&]() -> const detail::Genome& {
        const int a = static_cast<int>(rng() % pop.size());
        const int b = static_cast<int>(rng() % pop.size());
        return fitness(recs[a]) <= fitness(recs[b]) ? pop[a] : pop[b];
    };

    // Coordinate-descent polish of the incumbent; neighbors share the cache, so only
    // unseen designs spend budget.
    auto polish = [&](std::int64_t budget_cap) {
        bool improved = true;
        while (improved && used < budget_cap) {
            improved = false;
            for (std::size_t gi = 0; gi < best_genome.g.size() && used < budget_cap; ++gi) {
                for (int delta : {1, -1}) {
                    detail::Genome cand = best_genome;
                    cand.g[gi] += delta;
                    evaluator.full_repair(cand);
                    if (cand.g == best_genome.g) continue;
                    bool miss = false;
                    const detail::EvalRecord rec = evaluator.evaluate_candidate(cand, &miss);
                    used += miss;
                    if (fitness(rec) < fitness(best_rec)) {
                        best_rec = rec;
                        best_genome = std::move(cand);
                        improved = true;
                    }
                    if (used >= budget_cap) break;
                }
            }
        }
    };

    // Evolve on most of the budget; the tail refines the incumbent locally.
    const std::int64_t evolve_budget = opts.budget - opts.budget / 8;
    const int generation_cap =
        std::max<std::int64_t>(400, 4 * opts.budget / std::max(opts.population, 1));
    int generation = 0;
    int stale_generations = 0;
    while (used < evolve_budget && generation < generation_cap && stale_generations < 50) {
        ++generation;
        std::vector<detail::Genome> next;
        next.reserve(opts.population);
        next.push_back(best_genome);  // elitism
        while (static_cast<int>(next.size()) < opts.population) {
            auto [c1, c2] = detail::uniform_crossover(tournament(), tournament(), rng,
                                                      opts.crossover_prob);
            detail::mutate(c1, rng, evaluator, bounds, m);
            detail::mutate(c2, rng, evaluator, bounds, m);
            evaluator.full_repair(c1);
            evaluator.full_repair(c2);
            next.push_back(std::move(c1));
            if (static_cast<int>(next.size()) < opts.population) next.push_back(std::move(c2));
        }
        pop = std::move(next);
        std::int64_t misses = detail::batch_evaluate(evaluator, pop, recs, opts.threads);
        used += misses;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (fitness(recs[i]) < fitness(best_rec)) {
                best_rec = recs[i];
                best_genome = pop[i];
            }
        stale_generations = misses == 0 ? stale_generations + 1 : 0;
        if (stale_generations >= 8 && used < evolve_budget) {
            // Converged within the cache: restart from a fresh random population and
            // spend the remaining budget exploring other basins. The incumbent stays
            // protected through elitism.
            for (auto& g : pop) {
                g = detail::random_genome(rng, evaluator, bounds, m, false);
                evaluator.full_repair(g);
            }
            pop[0] = best_genome;
            used += detail::batch_evaluate(evaluator, pop, recs, opts.threads);
            stale_generations = 0;
        }
        log_row(generation);
    }
    polish(opts.budget);
    log_row(generation + 1);

    out.best = evaluator.decode(best_genome);
    out.feasible = best_rec.feasible;
    out.violation = best_rec.feasible ? 0.0 : best_rec.violation;
    out.tessac = best_rec.tessac;
    out.evaluations_used = used;
    if (best_rec.structural_ok) {
        try {
            out.evaluation = evaluate(params, out.best, opts.eval);
        } catch (const std::exception&) {
            out.evaluation.reset();
        }
    }
    return out;
}

struct FrontSolution {
    StrategyDesign design;
    std::vector<double> tessac_per;
    double tessac_total = 0.0;
};

struct DecentralizedResult {
    std::vector<FrontSolution> front;
    std::vector<OptimizeLogRow> log;
    std::int64_t evaluations_used = 0;
};

namespace detail {

struct MultiObjective {
    Genome genome;
    std::vector<double> objectives;  // TESSAC_j
    double violation = 0.0;          // constraints: conditions + reference caps
    int rank = 0;
    double crowding = 0.0;
};

// Printed dominance: no objective worse, at least one strictly better.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

// Deb's constrained dominance.
inline bool constrained_dominates(const MultiObjective& a, const MultiObjective& b) {
    if (a.violation == 0.0 && b.violation > 0.0) return true;
    if (a.violation > 0.0 && b.violation == 0.0) return false;
    if (a.violation > 0.0) return a.violation < b.violation;
    return dominates(a.objectives, b.objectives);
}

inline void nondominated_sort(std::vector<MultiObjective>& pop,
                              std::vector<std::vector<int>>& fronts) {
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> dom_count(n, 0);
    fronts.assign(1, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (constrained_dominates(pop[i], pop[j]))
                dominated[i].push_back(j);
            else if (constrained_dominates(pop[j], pop[i]))
                ++dom_count[i];
        }
    for (int i = 0; i < n; ++i)
        if (dom_count[i] == 0) {
            pop[i].rank = 0;
            fronts[0].push_back(i);
        }
    int f = 0;
    while (!fronts[f].empty()) {
        std::vector<int> next;
        for (int i : fronts[f])
            for (int j : dominated[i])
                if (--dom_count[j] == 0) {
                    pop[j].rank = f + 1;
                    next.push_back(j);
                }
        fronts.push_back(std::move(next));
        ++f;
    }
    fronts.pop_back();
}

inline void crowding_distance(std::vector<MultiObjective>& pop, const std::vector<int>& front) {
    const std::size_t k = front.size();
    for (int i : front) pop[i].crowding = 0.0;
    if (k < 3) {
        for (int i : front) pop[i].crowding = std::numeric_limits<double>::infinity();
        return;
    }
    const std::size_t nobj = pop[front[0]].objectives.size();
    std::vector<int> order(front);
    for (std::size_t ob = 0; ob < nobj; ++ob) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return pop[a].objectives[ob] < pop[b].objectives[ob];
        });
        const double span = pop[order.back()].objectives[ob] - pop[order.front()].objectives[ob];
        pop[order.front()].crowding = std::numeric_limits<double>::infinity();
        pop[order.back()].crowding = std::numeric_limits<double>::infinity();
        if (span <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < order.size(); ++i)
            pop[order[i]].crowding += (pop[order[i + 1]].objectives[ob] -
                                       pop[order[i - 1]].objectives[ob]) /
                                      span;
    }
}

}  // namespace detail

// NSGA-II over the joint design plus launch cost fractions; returns the feasible
// non-dominated set from the final population.
inline DecentralizedResult optimize_decentralized_front(const ScenarioParams& params,
                                                        const DesignBounds& bounds,
                                                        const std::vector<double>& tessac_refs,
                                                        const GaOptions& opts = {}) {
    params.validate();
    bounds.validate(params.m());
    const int m = static_cast<int>(params.m());
    if (m < 2) throw std::invalid_argument("decentralized optimization requires m >= 2");
    if (static_cast<int>(tessac_refs.size()) != m)
        throw std::invalid_argument("one TESSAC reference per constellation required");
    for (double r : tessac_refs)
        if (!(r > 0.0)) throw std::invalid_argument("TESSAC references must be positive");
    if (opts.budget < opts.population)
        throw std::invalid_argument("budget must be at least the population size");

    detail::CandidateEvaluator evaluator(params, bounds, opts.eval);
    std::mt19937_64 rng(opts.seed ^ 0xdecef00dULL);

    // Violation mixes the service shortfalls with normalized reference-cap excesses;
    // objectives are computed for every structurally valid candidate so the two stay
    // commensurate under Deb's constrained dominance.
    auto make_individual = [&](detail::Genome&& g,
                               const detail::EvalRecord& rec) -> detail::MultiObjective {
        detail::MultiObjective ind;
        ind.genome = std::move(g);
        ind.objectives.assign(m, 1e12);
        if (!rec.structural_ok) {
            ind.violation = 1e6 + rec.violation;
            return ind;
        }
        ind.violation = rec.violation;
        const std::vector<double> y = evaluator.normalized_fractions(ind.genome.y);
        for (int j = 0; j < m; ++j) {
            ind.objectives[j] = y[j] * rec.launch_total + rec.cost_wo_launch[j];
            if (ind.objectives[j] > tessac_refs[j])
                ind.violation += (ind.objectives[j] - tessac_refs[j]) / tessac_refs[j];
        }
        return ind;
    };

    std::vector<detail::Genome> genomes(opts.population);
    for (auto& g : genomes) {
        g = detail::random_genome(rng, evaluator, bounds, m, true);
        evaluator.full_repair(g);
    }
    std::vector<detail::EvalRecord> recs;
    std::int64_t used = detail::batch_evaluate(evaluator, genomes, recs, opts.threads);

    std::vector<detail::MultiObjective> pop;
    pop.reserve(2 * opts.population);
    for (int i = 0; i < opts.population; ++i)
        pop.push_back(make_individual(std::move(genomes[i]), recs[i]));

    DecentralizedResult out;
    std::vector<std::vector<int>> fronts;
    detail::nondominated_sort(pop, fronts);
    for (const auto& f : fronts) detail::crowding_distance(pop, f);

    auto log_row = [&](int gen) {
        OptimizeLogRow row;
        row.generation = gen;
        row.evaluations = used;
        double best = std::numeric_limits<double>::infinity();
        double best_violation = std::numeric_limits<double>::infinity();
        bool any = false;
        for (const auto& ind : pop) {
            if (ind.violation == 0.0) {
                any = true;
                double tot = 0.0;
                for (double o : ind.objectives) tot += o;
                best = std::min(best, tot);
            }
            best_violation = std::min(best_violation, ind.violation);
        }
        row.has_feasible = any;
        row.best_tessac = best;
        row.best_violation = any ? 0.0 : best_violation;
        out.log.push_back(row);
    };
    log_row(0);

    auto tournament = [&]() -> const detail::MultiObjective& {
        const int a = static_cast<int>(rng() % pop.size());
        const int b = static_cast<int>(rng() % pop.size());
        const auto& pa = pop[a];
        const auto& pb = pop[b];
        if (pa.rank != pb.rank) return pa.rank < pb.rank ? pa : pb;
        return pa.crowding >= pb.crowding ? pa : pb;
    };

    // The launch-cost fractions evolve without spending design evaluations (they sit
    // outside the cache key), so the loop runs on a generation cap rather than a
    // budget-stagnation break.
    const int generation_cap =
        std::max<std::int64_t>(200, 2 * opts.budget / std::max(opts.population, 1));
    int generation = 0;
    while (used < opts.budget && generation < generation_cap) {
        ++generation;
        std::vector<detail::Genome> offspring;
        offspring.reserve(opts.population);
        while (static_cast<int>(offspring.size()) < opts.population) {
            auto [c1, c2] = detail::uniform_crossover(tournament().genome, tournament().genome,
                                                      rng, opts.crossover_prob);
            detail::mutate(c1, rng, evaluator, bounds, m);
            detail::mutate(c2, rng, evaluator, bounds, m);
            evaluator.full_repair(c1);
            evaluator.full_repair(c2);
            offspring.push_back(std::move(c1));
            if (static_cast<int>(offspring.size()) < opts.population)
                offspring.push_back(std::move(c2));
        }
        const std::int64_t misses = detail::batch_evaluate(evaluator, offspring, recs,
                                                           opts.threads);
        used += misses;
        for (std::size_t i = 0; i < offspring.size(); ++i)
            pop.push_back(make_individual(std::move(offspring[i]), recs[i]));

        detail::nondominated_sort(pop, fronts);
        std::vector<detail::MultiObjective> next;
        next.reserve(opts.population);
        for (auto& front : fronts) {
            detail::crowding_distance(pop, front);
            if (static_cast<int>(next.size() + front.size()) <= opts.population) {
                for (int i : front) next.push_back(std::move(pop[i]));
            } else {
                std::sort(front.begin(), front.end(), [&](int a, int b) {
                    return pop[a].crowding > pop[b].crowding;
                });
                for (int i : front) {
                    if (static_cast<int>(next.size()) >= opts.population) break;
                    next.push_back(std::move(pop[i]));
                }
            }
            if (static_cast<int>(next.size()) >= opts.population) break;
        }
        pop = std::move(next);
        detail::nondominated_sort(pop, fronts);
        for (const auto& f : fronts) detail::crowding_distance(pop, f);
        log_row(generation);
        if (used >= opts.budget) break;
    }
    out.evaluations_used = used;

    // Final front: feasible, mutually non-dominated, deduplicated on objectives.
    std::vector<const detail::MultiObjective*> feas;
    for (const auto& ind : pop)
        if (ind.violation == 0.0) feas.push_back(&ind);
    std::vector<FrontSolution> front;
    for (const auto* a : feas) {
        bool dominated = false;
        for (const auto* b : feas)
            if (b != a && detail::dominates(b->objectives, a->objectives)) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        bool dup = false;
        for (const auto& fs : front)
            if (fs.tessac_per == a->objectives) {
                dup = true;
                break;
            }
        if (dup) continue;
        FrontSolution fs;
        fs.design = evaluator.decode(a->genome);
        fs.tessac_per = a->objectives;
        fs.tessac_total = 0.0;
        for (double o : a->objectives) fs.tessac_total += o;
        front.push_back(std::move(fs));
    }
    out.front = std::move(front);
    if (out.front.empty()) {
        const detail::MultiObjective* closest = nullptr;
        for (const auto& ind : pop)
            if (closest == nullptr || ind.violation < closest->violation) closest = &ind;
        std::string msg =
            "decentralized front is empty: no candidate satisfied conditions 1-5 and the "
            "TESSAC reference caps within " +
            std::to_string(used) + " evaluations / " + std::to_string(generation) +
            " generations; closest violation " + std::to_string(closest->violation);
        if (closest->violation < 1e6) {
            msg += "; binding constraints:";
            for (int j = 0; j < m; ++j)
                if (closest->objectives[j] > tessac_refs[j])
                    msg += " TESSAC_" + std::to_string(j + 1) + " = " +
                           std::to_string(closest->objectives[j]) + " > ref " +
                           std::to_string(tessac_refs[j]);
        }
        throw std::runtime_error(msg);
    }
    return out;
}

// Canonical ordering of decision vectors for deterministic tie-breaks.
inline bool design_less(const StrategyDesign& a, const StrategyDesign& b) {
    auto key = [](const StrategyDesign& d) {
        std::vector<double> k{d.shared.parking_altitude_km,
                              static_cast<double>(d.shared.n_parking),
                              static_cast<double>(d.shared.slot_reorder_point)};
        for (const auto& p : d.inplane) {
            k.push_back(p.reorder_point);
            k.push_back(p.batch_size);
        }
        for (int s : d.order_up_to) k.push_back(s);
        for (double y : d.launch_cost_fractions) k.push_back(y);
        return k;
    };
    return key(a) < key(b);
}

// P_JD^2: pick the front member minimizing the bargaining-weighted cost sum.
inline const FrontSolution& select_agreement(const std::vector<FrontSolution>& front,
                                             const std::vector<double>& weights) {
    if (front.empty()) throw std::invalid_argument("front must be nonempty");
    const std::size_t m = front.front().tessac_per.size();
    if (weights.size() != m) throw std::invalid_argument("one weight per constellation required");
    double sum = 0.0;
    for (double b : weights) {
        if (b < 0.0) throw std::invalid_argument("bargaining weights must be nonnegative");
        sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("bargaining weights must sum to 1");

    const FrontSolution* best = &front.front();
    auto score = [&](const FrontSolution& f) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += weights[j] * f.tessac_per[j];
        return s;
    };
    for (const auto& f : front) {
        const double sf = score(f);
        const double sb = score(*best);
        if (sf < sb || (sf == sb && design_less(f.design, best->design))) best = &f;
    }
    return *best;
}

}  // namespace sparesat
