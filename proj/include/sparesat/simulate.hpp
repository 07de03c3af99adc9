#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sparesat/evaluate.hpp"

namespace sparesat {

struct SimOptions {
    double horizon_years = 20.0;
    int replications = 100;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.2;
    double warmup_min_years = 2.0;
    int threads = 0;                     // 0 = all hardware threads
    bool check_invariants = false;       // verify ledger identities after every event
    bool sampled_leadtime_mode = false;  // iid-uniform alignment phases instead of geometry
    bool record_occupancy = false;       // tally pre-arrival parking states (small chains only)
};

// Per-replication empirical metrics, in the same units as EvaluationResult.
struct RepMetrics {
    std::vector<double> lambda_parking, sl_plane, sl_parking, rho_plane, rho_parking;
    double n_parking = 0.0;
    double tessac = 0.0;
};

struct SimulationReport {
    RepMetrics mean;
    RepMetrics std_error;
    std::vector<RepMetrics> reps;
    std::int64_t total_failures = 0;
    std::int64_t total_launches = 0;
    std::int64_t total_events = 0;
    double max_launch_slots = 0.0;  // largest per-launch slot load observed
    std::map<std::vector<int>, std::int64_t> occupancy;
    int replications = 0;
    double horizon_years = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double wrap_two_pi(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

struct SimContext {
    const ScenarioParams* params;
    const StrategyDesign* design;
    std::vector<double> lambda_plane;  // per j, per time unit
    std::vector<double> drift;         // rad per time unit, signed
    std::vector<double> t_trans;       // time units
    std::vector<double> fuel_kg;
    std::vector<int> batch_slots;      // a_j
};

class Replication {
  public:
    Replication(const SimContext& ctx, const SimOptions& opts, std::uint64_t seed)
        : ctx_(ctx), opts_(opts), rng_(seed) {
        const auto& params = *ctx.params;
        const auto& design = *ctx.design;
        m_ = static_cast<int>(params.m());
        n_park_ = design.shared.n_parking;
        horizon_ = opts.horizon_years * params.n_t;
        warmup_ = std::max(opts.warmup_fraction * horizon_,
                           opts.warmup_min_years * params.n_t);
        warmup_ = std::min(warmup_, horizon_);

        planes_.resize(m_);
        for (int j = 0; j < m_; ++j) {
            const int np = params.constellations[j].n_planes;
            planes_[j].resize(np);
            const double offset = uniform() * kTwoPi;
            for (int p = 0; p < np; ++p) {
                auto& pl = planes_[j][p];
                // Start at a uniformly random point of the (s, Q) cycle so the fleet
                // is not phase-locked at the ceiling.
                const int q = design.inplane[j].batch_size;
                pl.on_hand = design.inplane[j].reorder_point + 1 + uniform_int(q);
                pl.initial_stock = pl.on_hand;
                pl.phase = offset + kTwoPi * p / np;
                if (ctx.lambda_plane[j] > 0.0)
                    schedule(sample_exponential(1.0 / ctx.lambda_plane[j]), EventKind::Failure, j,
                             p, -1);
            }
        }
        orbits_.resize(n_park_);
        const double park_offset = uniform() * kTwoPi;
        for (int k = 0; k < n_park_; ++k) {
            auto& ob = orbits_[k];
            ob.phase = park_offset + kTwoPi * k / n_park_;
            ob.on_hand.assign(m_, 0);
            ob.on_order.assign(m_, 0);
            ob.drop.assign(m_, 0);
            ob.backorders.resize(m_);
            ob.onhand_integral.assign(m_, 0.0);
            ob.onhand_last.assign(m_, 0.0);
            for (int j = 0; j < m_; ++j) ob.on_hand[j] = design.order_up_to[j];
        }
        stats_init();
    }

    RepMetrics run(SimulationReport* shared_report) {
        while (!events_.empty()) {
            const Event ev = events_.top();
            if (ev.t >= horizon_) break;
            events_.pop();
            now_ = ev.t;
            ++event_count_;
            switch (ev.kind) {
                case EventKind::Failure: on_failure(ev.j, ev.p); break;
                case EventKind::PlaneDelivery: on_plane_delivery(ev.j, ev.p); break;
                case EventKind::LaunchArrival: on_launch_arrival(ev.p, ev.payload); break;
            }
            if (opts_.check_invariants) verify_ledgers();
        }
        now_ = horizon_;
        flush_all();
        verify_conservation();
        if (shared_report != nullptr) {
            shared_report->total_failures += failures_all_;
            shared_report->total_launches += launches_all_;
            shared_report->total_events += event_count_;
            shared_report->max_launch_slots =
                std::max(shared_report->max_launch_slots, max_launch_slots_);
            for (const auto& [state, n] : occupancy_) shared_report->occupancy[state] += n;
        }
        return finish_metrics();
    }

  private:
    enum class EventKind : std::uint8_t { Failure, PlaneDelivery, LaunchArrival };

    struct Event {
        double t;
        std::uint64_t seq;
        EventKind kind;
        int j;
        int p;        // plane index or parking orbit index
        int payload;  // launch order pool slot
        bool operator>(const Event& o) const { return std::tie(t, seq) > std::tie(o.t, o.seq); }
    };

    struct PlaneState {
        int on_hand = 0;
        int backorders = 0;
        int on_order = 0;  // satellites (0 or Q_j)
        int initial_stock = 0;
        double phase = 0.0;
        double ns_integral = 0.0;
        double ns_last = 0.0;
        std::int64_t failures_all = 0;
        std::int64_t deliveries_all = 0;
    };

    struct OrbitState {
        double phase = 0.0;
        std::vector<int> on_hand;   // batches per j
        std::vector<int> on_order;  // batches per j
        std::vector<int> drop;      // w_j
        std::vector<std::deque<std::pair<int, int>>> backorders;  // per j: (j, plane)
        std::vector<double> onhand_integral;
        std::vector<double> onhand_last;
    };

    double uniform() { return (rng_() >> 11) * 0x1.0p-53; }
    int uniform_int(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    double sample_exponential(double mean) { return -mean * std::log1p(-uniform()); }

    void schedule(double t, EventKind kind, int j, int p, int payload) {
        events_.push(Event{t, seq_++, kind, j, p, payload});
    }

    // Time until parking orbit k next aligns with plane (j, p).
    double wait_for_alignment(int k, int j, int p) const {
        const double drift = ctx_.drift[j];
        const double psi =
            wrap_two_pi(orbits_[k].phase - planes_[j][p].phase + drift * now_);
        if (drift < 0.0) return psi / -drift;
        return (kTwoPi - psi) / drift;
    }

    void accrue(double& integral, double& last_marker, double value_before_change) {
        const double lo = std::max(last_marker, warmup_);
        const double hi = std::min(now_, horizon_);
        if (hi > lo) integral += value_before_change * (hi - lo);
        last_marker = now_;
    }

    void on_failure(int j, int p) {
        auto& pl = planes_[j][p];
        accrue(pl.ns_integral, pl.ns_last, pl.on_hand - pl.backorders);
        ++pl.failures_all;
        ++failures_all_;
        if (now_ >= warmup_) {
            ++failures_[j];
            if (pl.on_hand > 0) ++immediate_fills_[j];
        }
        if (pl.on_hand > 0)
            --pl.on_hand;
        else
            ++pl.backorders;
        maybe_place_plane_order(j, p);
        schedule(now_ + sample_exponential(1.0 / ctx_.lambda_plane[j]), EventKind::Failure, j, p,
                 -1);
    }

    void maybe_place_plane_order(int j, int p) {
        auto& pl = planes_[j][p];
        const int ip = pl.on_hand - pl.backorders + pl.on_order;
        if (ip > ctx_.design->inplane[j].reorder_point || pl.on_order != 0) return;
        pl.on_order = ctx_.design->inplane[j].batch_size;
        parking_demand(j, p);
    }

    void parking_demand(int j, int p) {
        if (now_ >= warmup_) ++parking_demands_[j];
        // Rank parking orbits by time to alignment with the requesting plane.
        thread_local std::vector<std::pair<double, int>> waits;
        waits.clear();
        if (opts_.sampled_leadtime_mode) {
            const double period = kTwoPi / (n_park_ * std::abs(ctx_.drift[j]));
            const double u = uniform() * period;
            for (int k = 0; k < n_park_; ++k) waits.emplace_back(u + k * period, k);
        } else {
            for (int k = 0; k < n_park_; ++k) waits.emplace_back(wait_for_alignment(k, j, p), k);
            std::sort(waits.begin(), waits.end());
        }
        if (now_ >= warmup_ && orbits_[waits.front().second].on_hand[j] >= 1)
            ++closest_available_[j];
        int serve = -1;
        double wait = 0.0;
        for (const auto& [w, k] : waits) {
            if (orbits_[k].on_hand[j] >= 1) {
                serve = k;
                wait = w;
                break;
            }
        }
        if (serve >= 0) {
            auto& ob = orbits_[serve];
            accrue(ob.onhand_integral[j], ob.onhand_last[j], ob.on_hand[j]);
            --ob.on_hand[j];
            schedule(now_ + wait + ctx_.t_trans[j], EventKind::PlaneDelivery, j, p, -1);
        } else {
            serve = waits.front().second;
            orbits_[serve].backorders[j].emplace_back(j, p);
        }
        register_drop(serve, j);
    }

    void register_drop(int k, int j) {
        auto& ob = orbits_[k];
        if (opts_.record_occupancy)
            ++occupancy_[std::vector<int>(ob.drop.begin(), ob.drop.end())];
        ++ob.drop[j];
        long slots = 0;
        for (int jj = 0; jj < m_; ++jj)
            slots += static_cast<long>(ctx_.batch_slots[jj]) * ob.drop[jj];
        const int u = ctx_.design->shared.slot_reorder_point;
        const int cap = ctx_.params->launcher.capacity_slots;
        if (slots < u) return;
        std::vector<int> order(ob.drop);
        if (slots <= cap) {
            std::fill(ob.drop.begin(), ob.drop.end(), 0);
        } else {
            --order[j];  // the triggering demand waits for the next vehicle
            std::fill(ob.drop.begin(), ob.drop.end(), 0);
            ob.drop[j] = 1;
        }
        long order_slots = 0;
        for (int jj = 0; jj < m_; ++jj) {
            order_slots += static_cast<long>(ctx_.batch_slots[jj]) * order[jj];
            ob.on_order[jj] += order[jj];
        }
        if (order_slots > cap)
            throw std::logic_error("per-launch capacity exceeded; trigger logic bug");
        max_launch_slots_ = std::max(max_launch_slots_, static_cast<double>(order_slots));
        ++launches_all_;
        if (now_ >= warmup_) ++launches_;
        const int slot = static_cast<int>(payloads_.size());
        payloads_.push_back(std::move(order));
        schedule(now_ + ctx_.params->launcher.order_processing_time +
                     sample_exponential(ctx_.params->launcher.mean_wait),
                 EventKind::LaunchArrival, -1, k, slot);
    }

    void on_plane_delivery(int j, int p) {
        auto& pl = planes_[j][p];
        accrue(pl.ns_integral, pl.ns_last, pl.on_hand - pl.backorders);
        pl.on_hand += ctx_.design->inplane[j].batch_size;
        pl.on_order = 0;
        const int fill = std::min(pl.on_hand, pl.backorders);
        pl.on_hand -= fill;
        pl.backorders -= fill;
        ++pl.deliveries_all;
        if (now_ >= warmup_) ++deliveries_[j];
        maybe_place_plane_order(j, p);
    }

    void on_launch_arrival(int k, int payload) {
        auto& ob = orbits_[k];
        const std::vector<int>& order = payloads_[payload];
        for (int j = 0; j < m_; ++j) {
            if (order[j] == 0) continue;
            accrue(ob.onhand_integral[j], ob.onhand_last[j], ob.on_hand[j]);
            ob.on_hand[j] += order[j];
            ob.on_order[j] -= order[j];
            while (!ob.backorders[j].empty() && ob.on_hand[j] >= 1) {
                const auto [jj, pp] = ob.backorders[j].front();
                ob.backorders[j].pop_front();
                --ob.on_hand[j];
                schedule(now_ + wait_for_alignment(k, jj, pp) + ctx_.t_trans[jj],
                         EventKind::PlaneDelivery, jj, pp, -1);
            }
        }
    }

    void verify_ledgers() const {
        for (int j = 0; j < m_; ++j)
            for (const auto& pl : planes_[j]) {
                if (pl.on_hand < 0 || pl.backorders < 0 || pl.on_order < 0)
                    throw std::logic_error("negative plane ledger entry");
                if (pl.on_hand != 0 && pl.backorders != 0)
                    throw std::logic_error("plane holds stock and backorders simultaneously");
            }
        for (const auto& ob : orbits_)
            for (int j = 0; j < m_; ++j) {
                const int backlog = static_cast<int>(ob.backorders[j].size());
                const int ip = ob.on_hand[j] - backlog + ob.on_order[j];
                if (ip != ctx_.design->order_up_to[j] - ob.drop[j])
                    throw std::logic_error("parking ledger identity IP = S - w violated");
                if (ob.on_hand[j] < 0 || ob.on_order[j] < 0)
                    throw std::logic_error("negative parking ledger entry");
                if (ob.on_hand[j] != 0 && backlog != 0)
                    throw std::logic_error("parking orbit holds stock and backorders");
            }
    }

    void verify_conservation() const {
        for (int j = 0; j < m_; ++j) {
            const int q = ctx_.design->inplane[j].batch_size;
            for (const auto& pl : planes_[j]) {
                const std::int64_t replaced =
                    pl.initial_stock - pl.on_hand + static_cast<std::int64_t>(q) * pl.deliveries_all;
                if (pl.failures_all != replaced + pl.backorders)
                    throw std::logic_error("failure conservation violated at horizon end");
            }
        }
    }

    void flush_all() {
        for (int j = 0; j < m_; ++j)
            for (auto& pl : planes_[j]) accrue(pl.ns_integral, pl.ns_last, pl.on_hand - pl.backorders);
        for (auto& ob : orbits_)
            for (int j = 0; j < m_; ++j)
                accrue(ob.onhand_integral[j], ob.onhand_last[j], ob.on_hand[j]);
    }

    void stats_init() {
        failures_.assign(m_, 0);
        immediate_fills_.assign(m_, 0);
        parking_demands_.assign(m_, 0);
        closest_available_.assign(m_, 0);
        deliveries_.assign(m_, 0);
    }

    RepMetrics finish_metrics() const {
        const auto& params = *ctx_.params;
        const auto& design = *ctx_.design;
        const double dur = horizon_ - warmup_;
        const double years = dur / params.n_t;
        RepMetrics rm;
        rm.lambda_parking.resize(m_);
        rm.sl_plane.resize(m_);
        rm.sl_parking.resize(m_);
        rm.rho_plane.resize(m_);
        rm.rho_parking.resize(m_);
        double tessac = params.launcher.launch_cost_musd * launches_ / years;
        for (int j = 0; j < m_; ++j) {
            const auto& c = params.constellations[j];
            rm.lambda_parking[j] = parking_demands_[j] / (dur * n_park_);
            rm.rho_plane[j] =
                failures_[j] > 0 ? static_cast<double>(immediate_fills_[j]) / failures_[j] : 1.0;
            rm.rho_parking[j] = parking_demands_[j] > 0
                                    ? static_cast<double>(closest_available_[j]) /
                                          parking_demands_[j]
                                    : 1.0;
            double ns = 0.0;
            for (const auto& pl : planes_[j]) ns += pl.ns_integral / dur;
            rm.sl_plane[j] = ns / c.n_planes;
            double oh = 0.0;
            for (const auto& ob : orbits_) oh += ob.onhand_integral[j] / dur;
            rm.sl_parking[j] = oh / n_park_;
            const double hold =
                holding_cost(c, rm.sl_plane[j], rm.sl_parking[j], design.inplane[j].batch_size,
                             n_park_);
            const double man = ctx_.fuel_kg[j] * c.fuel_cost_musd_per_kg *
                               (static_cast<double>(deliveries_[j]) *
                                design.inplane[j].batch_size) /
                               years;
            const double mfg = c.manufac_cost_musd * failures_[j] / years;
            tessac += hold + man + mfg;
        }
        rm.n_parking = launches_ / (dur * n_park_);
        rm.tessac = tessac;
        return rm;
    }

    const SimContext& ctx_;
    const SimOptions& opts_;
    std::mt19937_64 rng_;
    int m_ = 0;
    int n_park_ = 0;
    double horizon_ = 0.0;
    double warmup_ = 0.0;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<std::vector<PlaneState>> planes_;
    std::vector<OrbitState> orbits_;
    std::vector<std::vector<int>> payloads_;
    std::vector<std::int64_t> failures_, immediate_fills_, parking_demands_, closest_available_,
        deliveries_;
    std::int64_t launches_ = 0;
    std::int64_t launches_all_ = 0;
    std::int64_t failures_all_ = 0;
    std::int64_t event_count_ = 0;
    double max_launch_slots_ = 0.0;
    std::map<std::vector<int>, std::int64_t> occupancy_;
};

}  // namespace detail

inline SimulationReport simulate(const ScenarioParams& params, const StrategyDesign& design,
                                 const SimOptions& opts = {}) {
    params.validate(/*allow_zero_failure_rate=*/true);
    design.validate(params.m());
    if (opts.horizon_years < 1.0) throw std::invalid_argument("horizon must be >= 1 year");
    if (opts.replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (design.shared.slot_reorder_point > params.launcher.capacity_slots)
        throw std::invalid_argument("slot reorder point U exceeds launcher capacity A");

    detail::SimContext ctx;
    ctx.params = &params;
    ctx.design = &design;
    const std::size_t m = params.m();
    ctx.lambda_plane.resize(m);
    ctx.drift.resize(m);
    ctx.t_trans.resize(m);
    ctx.fuel_kg.resize(m);
    ctx.batch_slots.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = params.constellations[j];
        ctx.lambda_plane[j] = plane_demand_rate(c, params.n_t);
        const CircularOrbit parking{design.shared.parking_altitude_km, params.inclination_deg};
        const CircularOrbit plane{c.plane_altitude_km, params.inclination_deg};
        ctx.drift[j] = relative_raan_drift(parking, plane, params.n_t, params.constants);
        if (ctx.drift[j] == 0.0)
            throw std::invalid_argument("zero relative drift; alignment windows never recur");
        const double dv = transfer_delta_v(parking.radius_km(params.constants),
                                           plane.radius_km(params.constants), params.constants);
        ctx.fuel_kg[j] = fuel_mass(dv, c.propulsion());
        ctx.t_trans[j] = time_of_flight(ctx.fuel_kg[j], c.propulsion(), params.n_t);
        ctx.batch_slots[j] = c.shipping_size_slots * design.inplane[j].batch_size;
    }

    SimulationReport report;
    report.replications = opts.replications;
    report.horizon_years = opts.horizon_years;
    report.reps.resize(opts.replications);

    std::vector<SimulationReport> partials;
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int threads =
        std::max(1, std::min(opts.threads > 0 ? opts.threads : std::max(hw, 1),
                             opts.replications));
    partials.resize(threads);
    auto worker = [&](int tid) {
        for (int r = tid; r < opts.replications; r += threads) {
            detail::Replication rep(ctx, opts,
                                    detail::splitmix64(opts.seed ^ (0xabcd1234ULL + r)));
            report.reps[r] = rep.run(&partials[tid]);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& part : partials) {
        report.total_failures += part.total_failures;
        report.total_launches += part.total_launches;
        report.total_events += part.total_events;
        report.max_launch_slots = std::max(report.max_launch_slots, part.max_launch_slots);
        for (const auto& [state, n] : part.occupancy) report.occupancy[state] += n;
    }

    // Aggregate (fixed order over replication slots, independent of thread schedule).
    auto zeros = [&] {
        RepMetrics z;
        z.lambda_parking.assign(m, 0.0);
        z.sl_plane.assign(m, 0.0);
        z.sl_parking.assign(m, 0.0);
        z.rho_plane.assign(m, 0.0);
        z.rho_parking.assign(m, 0.0);
        return z;
    };
    report.mean = zeros();
    report.std_error = zeros();
    const double n = opts.replications;
    auto acc = [&](auto proj) {
        double s1 = 0.0, s2 = 0.0;
        for (const auto& r : report.reps) {
            const double v = proj(r);
            s1 += v;
            s2 += v * v;
        }
        const double mean = s1 / n;
        const double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) : 0.0;
        return std::pair<double, double>(mean, std::sqrt(var / n));
    };
    for (std::size_t j = 0; j < m; ++j) {
        std::tie(report.mean.lambda_parking[j], report.std_error.lambda_parking[j]) =
            acc([&](const RepMetrics& r) { return r.lambda_parking[j]; });
        std::tie(report.mean.sl_plane[j], report.std_error.sl_plane[j]) =
            acc([&](const RepMetrics& r) { return r.sl_plane[j]; });
        std::tie(report.mean.sl_parking[j], report.std_error.sl_parking[j]) =
            acc([&](const RepMetrics& r) { return r.sl_parking[j]; });
        std::tie(report.mean.rho_plane[j], report.std_error.rho_plane[j]) =
            acc([&](const RepMetrics& r) { return r.rho_plane[j]; });
        std::tie(report.mean.rho_parking[j], report.std_error.rho_parking[j]) =
            acc([&](const RepMetrics& r) { return r.rho_parking[j]; });
    }
    std::tie(report.mean.n_parking, report.std_error.n_parking) =
        acc([](const RepMetrics& r) { return r.n_parking; });
    std::tie(report.mean.tessac, report.std_error.tessac) =
        acc([](const RepMetrics& r) { return r.tessac; });
    return report;
}

// Relative/absolute error table in the shape of the validation study.
struct ErrorTable {
    double rel_lambda_parking_max = 0.0;  // %
    double rel_sl_plane_max = 0.0;        // %
    double rel_sl_parking_max = 0.0;      // %
    double rel_n_parking = 0.0;           // %
    double rel_tessac = 0.0;              // %
    double abs_rho_plane_max = 0.0;       // percentage points
    double abs_rho_parking_max = 0.0;     // percentage points
    bool defined = true;                  // false when an empirical denominator is zero
    std::vector<std::string> undefined_metrics;
};

inline ErrorTable error_metrics(const EvaluationResult& model, const SimulationReport& sim) {
    ErrorTable t;
    const std::size_t m = model.per.size();
    if (sim.mean.lambda_parking.size() != m)
        throw std::invalid_argument("error_metrics: mismatched instance");
    auto rel = [&](double emp, double mod, const char* name) {
        if (emp == 0.0) {
            t.defined = false;
            t.undefined_metrics.emplace_back(name);
            return 0.0;
        }
        return std::abs(emp - mod) / std::abs(emp) * 100.0;
    };
    for (std::size_t j = 0; j < m; ++j) {
        t.rel_lambda_parking_max =
            std::max(t.rel_lambda_parking_max,
                     rel(sim.mean.lambda_parking[j], model.per[j].lambda_parking, "lambda_parking"));
        t.rel_sl_plane_max = std::max(t.rel_sl_plane_max,
                                      rel(sim.mean.sl_plane[j], model.per[j].sl_plane, "sl_plane"));
        t.rel_sl_parking_max = std::max(
            t.rel_sl_parking_max, rel(sim.mean.sl_parking[j], model.per[j].sl_parking, "sl_parking"));
        t.abs_rho_plane_max =
            std::max(t.abs_rho_plane_max,
                     std::abs(sim.mean.rho_plane[j] - model.per[j].rho_plane) * 100.0);
        t.abs_rho_parking_max =
            std::max(t.abs_rho_parking_max,
                     std::abs(sim.mean.rho_parking[j] - model.per[j].rho_parking) * 100.0);
    }
    t.rel_n_parking = rel(sim.mean.n_parking, model.n_parking, "n_parking");
    t.rel_tessac = rel(sim.mean.tessac, model.costs.tessac_total, "tessac");
    return t;
}

}  // namespace sparesat
