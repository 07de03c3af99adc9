// Command-line front end: evaluate, simulate, validate and optimize joint
// replenishment strategies described by a scenario document.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "sparesat/sparesat.hpp"

namespace fs = std::filesystem;
using namespace sparesat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitRuntimeError = 3;

struct GlobalArgs {
    std::string config;
    std::string out_dir = "out";
    std::uint64_t seed = 0;  // 0: take the document's seed
    int threads = 0;
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::uint64_t effective_seed(const GlobalArgs& args, const ScenarioDocument& doc) {
    return args.seed != 0 ? args.seed : doc.seed;
}

void print_evaluation(const ScenarioParams& params, const EvaluationResult& result) {
    std::printf("%-28s", "quantity");
    for (std::size_t j = 0; j < params.m(); ++j) std::printf("  con %zu", j + 1);
    std::printf("\n");
    auto row = [&](const char* name, auto proj) {
        std::printf("%-28s", name);
        for (const auto& pe : result.per) std::printf("  %9.4f", proj(pe));
        std::printf("\n");
    };
    row("lambda_plane [1/unit]", [](const auto& p) { return p.lambda_plane; });
    row("lambda_parking [1/unit]", [](const auto& p) { return p.lambda_parking; });
    row("transfer_time [unit]", [](const auto& p) { return p.transfer_time; });
    row("es_plane [sat]", [](const auto& p) { return p.es_plane; });
    row("rho_plane [-]", [](const auto& p) { return p.rho_plane; });
    row("sl_plane [sat]", [](const auto& p) { return p.sl_plane; });
    row("es_parking [batch]", [](const auto& p) { return p.es_parking; });
    row("eq_parking [batch]", [](const auto& p) { return p.eq_parking; });
    row("rho_parking [-]", [](const auto& p) { return p.rho_parking; });
    row("sl_parking [batch]", [](const auto& p) { return p.sl_parking; });
    std::printf("%-28s", "holding_cost [musd/yr]");
    for (double v : result.costs.holding) std::printf("  %9.3f", v);
    std::printf("\n%-28s", "tessac_j [musd/yr]");
    for (double v : result.costs.tessac_per) std::printf("  %9.3f", v);
    std::printf("\n");
    std::printf("n_parking [1/unit]       %.6f\n", result.n_parking);
    std::printf("launch_cost [musd/yr]    %.3f\n", result.costs.launch_total);
    std::printf("TESSAC [musd/yr]         %.3f\n", result.costs.tessac_total);
}

int cmd_evaluate(const GlobalArgs& args) {
    const auto doc = load_scenario(args.config);
    if (!doc.design)
        throw ConfigError(args.config + ": evaluate requires a 'design' section");
    const auto out = ensure_out_dir(args.out_dir);
    const auto verdict = check_feasibility(doc.params, *doc.design);
    if (verdict.evaluation) {
        print_evaluation(doc.params, *verdict.evaluation);
        write_evaluation_csv((out / "evaluation.csv").string(), doc.params,
                             *verdict.evaluation);
        std::printf("wrote %s\n", (out / "evaluation.csv").string().c_str());
    }
    if (!verdict.feasible) {
        std::printf("verdict: %s\n", verdict.summary().c_str());
        return kExitInfeasible;
    }
    std::printf("verdict: feasible\n");
    return kExitOk;
}

void write_sim_outputs(const std::string& instance_id, const EvaluationResult& model,
                       const SimulationReport& report, CsvWriter& aggregate,
                       CsvWriter& replications) {
    const auto num = format_number;
    const auto errors = error_metrics(model, report);
    auto put = [&](const std::string& metric, double analytic, double empirical, double error,
                   const char* units) {
        aggregate.row({instance_id, metric, num(analytic), num(empirical), num(error), units});
    };
    const std::size_t m = model.per.size();
    for (std::size_t j = 0; j < m; ++j) {
        const std::string sj = std::to_string(j + 1);
        put("lambda_parking[" + sj + "]", model.per[j].lambda_parking,
            report.mean.lambda_parking[j],
            std::abs(report.mean.lambda_parking[j] - model.per[j].lambda_parking), "1/unit");
        put("sl_plane[" + sj + "]", model.per[j].sl_plane, report.mean.sl_plane[j],
            std::abs(report.mean.sl_plane[j] - model.per[j].sl_plane), "sat");
        put("sl_parking[" + sj + "]", model.per[j].sl_parking, report.mean.sl_parking[j],
            std::abs(report.mean.sl_parking[j] - model.per[j].sl_parking), "batch");
        put("rho_plane[" + sj + "]", model.per[j].rho_plane, report.mean.rho_plane[j],
            std::abs(report.mean.rho_plane[j] - model.per[j].rho_plane), "-");
        put("rho_parking[" + sj + "]", model.per[j].rho_parking, report.mean.rho_parking[j],
            std::abs(report.mean.rho_parking[j] - model.per[j].rho_parking), "-");
    }
    put("n_parking", model.n_parking, report.mean.n_parking, errors.rel_n_parking, "1/unit");
    put("tessac", model.costs.tessac_total, report.mean.tessac, errors.rel_tessac, "musd/yr");
    for (std::size_t r = 0; r < report.reps.size(); ++r) {
        const auto& rep = report.reps[r];
        const std::string rid = std::to_string(r);
        for (std::size_t j = 0; j < m; ++j) {
            const std::string sj = std::to_string(j + 1);
            replications.row({instance_id, rid, "lambda_parking[" + sj + "]",
                              num(rep.lambda_parking[j])});
            replications.row({instance_id, rid, "sl_plane[" + sj + "]", num(rep.sl_plane[j])});
            replications.row(
                {instance_id, rid, "sl_parking[" + sj + "]", num(rep.sl_parking[j])});
            replications.row({instance_id, rid, "rho_plane[" + sj + "]", num(rep.rho_plane[j])});
            replications.row(
                {instance_id, rid, "rho_parking[" + sj + "]", num(rep.rho_parking[j])});
        }
        replications.row({instance_id, rid, "n_parking", num(rep.n_parking)});
        replications.row({instance_id, rid, "tessac", num(rep.tessac)});
    }
}

int cmd_simulate(const GlobalArgs& args, double horizon, int replications,
                 bool check_invariants, bool sampled_leadtime) {
    const auto doc = load_scenario(args.config);
    if (!doc.design)
        throw ConfigError(args.config + ": simulate requires a 'design' section");
    const auto verdict = check_feasibility(doc.params, *doc.design);
    if (!verdict.feasible) {
        std::fprintf(stderr, "instance rejected: %s\n", verdict.summary().c_str());
        return kExitInfeasible;
    }
    SimOptions opts;
    opts.horizon_years = horizon;
    opts.replications = replications;
    opts.seed = effective_seed(args, doc);
    opts.threads = args.threads;
    opts.check_invariants = check_invariants;
    opts.sampled_leadtime_mode = sampled_leadtime;
    const auto report = simulate(doc.params, *doc.design, opts);
    const auto& model = *verdict.evaluation;

    const auto out = ensure_out_dir(args.out_dir);
    CsvWriter aggregate((out / "sim_metrics.csv").string(),
                        "instance_id,metric,analytic,empirical,error,units");
    CsvWriter reps((out / "sim_replications.csv").string(),
                   "instance_id,replication,metric,value");
    write_sim_outputs("0", model, report, aggregate, reps);

    const auto errors = error_metrics(model, report);
    std::printf("replications=%d horizon=%.1fy events=%lld launches=%lld\n", replications,
                horizon, static_cast<long long>(report.total_events),
                static_cast<long long>(report.total_launches));
    std::printf("TESSAC: model %.3f vs sim %.3f (rel err %.3f%%)\n", model.costs.tessac_total,
                report.mean.tessac, errors.rel_tessac);
    std::printf("n_parking: model %.6f vs sim %.6f (rel err %.3f%%)\n", model.n_parking,
                report.mean.n_parking, errors.rel_n_parking);
    std::printf("wrote %s and %s\n", (out / "sim_metrics.csv").string().c_str(),
                (out / "sim_replications.csv").string().c_str());
    return kExitOk;
}

int cmd_validate(const GlobalArgs& args, int instances_override, int replications,
                 double horizon) {
    const auto doc = load_scenario(args.config);
    if (!doc.validation)
        throw ConfigError(args.config + ": validate requires a 'validation' section");
    const auto& vc = *doc.validation;
    const int per_m = instances_override > 0 ? instances_override : vc.instances_per_m;
    const std::uint64_t seed = effective_seed(args, doc);
    const auto out = ensure_out_dir(args.out_dir);

    CsvWriter table((out / "validation_errors.csv").string(),
                    "metric,units," + [&] {
                        std::string h;
                        for (std::size_t i = 0; i < vc.m_values.size(); ++i) {
                            if (i) h += ',';
                            h += "m" + std::to_string(vc.m_values[i]);
                        }
                        return h;
                    }());
    CsvWriter per_instance((out / "validation_instances.csv").string(),
                           "m,instance,metric,analytic,empirical,error,units");

    std::vector<std::array<double, 7>> means;  // per m: metric means
    for (const int m : vc.m_values) {
        std::printf("m=%d: generating %d instances...\n", m, per_m);
        const auto instances = generate_instances(m, vc.ranges, vc.common,
                                                  doc.params.fill_rate_requirement, per_m,
                                                  seed + m);
        std::array<double, 7> acc{};
        int defined = 0;
        for (const auto& inst : instances) {
            const auto model = evaluate(inst.params, inst.design);
            SimOptions sopts;
            sopts.horizon_years = horizon;
            sopts.replications = replications;
            sopts.seed = inst.sim_seed;
            sopts.threads = args.threads;
            const auto report = simulate(inst.params, inst.design, sopts);
            const auto err = error_metrics(model, report);
            const std::string mid = std::to_string(m);
            const std::string iid = std::to_string(inst.id);
            auto put = [&](const char* metric, double a, double e, double er, const char* u) {
                per_instance.row({mid, iid, metric, format_number(a), format_number(e),
                                  format_number(er), u});
            };
            put("rel_lambda_parking_max", 0.0, 0.0, err.rel_lambda_parking_max, "%");
            put("rel_sl_plane_max", 0.0, 0.0, err.rel_sl_plane_max, "%");
            put("rel_sl_parking_max", 0.0, 0.0, err.rel_sl_parking_max, "%");
            put("rel_n_parking", model.n_parking, report.mean.n_parking, err.rel_n_parking, "%");
            put("rel_tessac", model.costs.tessac_total, report.mean.tessac, err.rel_tessac, "%");
            put("abs_rho_plane_max", 0.0, 0.0, err.abs_rho_plane_max, "pp");
            put("abs_rho_parking_max", 0.0, 0.0, err.abs_rho_parking_max, "pp");
            if (err.defined) {
                ++defined;
                acc[0] += err.rel_lambda_parking_max;
                acc[1] += err.rel_sl_plane_max;
                acc[2] += err.rel_sl_parking_max;
                acc[3] += err.rel_n_parking;
                acc[4] += err.rel_tessac;
                acc[5] += err.abs_rho_plane_max;
                acc[6] += err.abs_rho_parking_max;
            } else {
                std::fprintf(stderr, "instance m=%d id=%d: undefined error metrics\n", m,
                             inst.id);
            }
            std::printf("  instance %d: n_parking %.2f%%, tessac %.2f%%\n", inst.id,
                        err.rel_n_parking, err.rel_tessac);
        }
        for (auto& v : acc) v /= std::max(defined, 1);
        means.push_back(acc);
        if (replications < 2)
            std::fprintf(stderr, "warning: single replication; standard errors unreliable\n");
    }
    static const char* kNames[7] = {"lambda_parking_j", "sl_plane_j",  "sl_parking_j",
                                    "n_parking",        "tessac",      "rho_plane_j",
                                    "rho_parking_j"};
    static const char* kUnits[7] = {"%", "%", "%", "%", "%", "pp", "pp"};
    for (int k = 0; k < 7; ++k) {
        std::vector<std::string> cells{kNames[k], kUnits[k]};
        for (std::size_t i = 0; i < vc.m_values.size(); ++i)
            cells.push_back(format_number(means[i][k]));
        table.row(cells);
        std::printf("%-18s", kNames[k]);
        for (std::size_t i = 0; i < vc.m_values.size(); ++i)
            std::printf("  m=%d: %6.3f%s", vc.m_values[i], means[i][k], kUnits[k]);
        std::printf("\n");
    }
    std::printf("wrote %s\n", (out / "validation_errors.csv").string().c_str());
    return kExitOk;
}

DesignBounds require_bounds(const ScenarioDocument& doc, const std::string& path) {
    if (!doc.bounds) throw ConfigError(path + ": optimize requires a 'bounds' section");
    return *doc.bounds;
}

int cmd_optimize(const GlobalArgs& args, const std::string& mode, std::int64_t budget,
                 int population) {
    const auto doc = load_scenario(args.config);
    const auto bounds = require_bounds(doc, args.config);
    const auto out = ensure_out_dir(args.out_dir);
    GaOptions opts;
    opts.population = population;
    opts.budget = budget;
    opts.seed = effective_seed(args, doc);
    opts.threads = std::max(args.threads, 1);

    auto write_log = [&](const std::vector<OptimizeLogRow>& log, const std::string& name) {
        CsvWriter csv((out / name).string(),
                      "generation,evaluations,best_tessac,has_feasible,best_violation");
        for (const auto& row : log)
            csv.row({std::to_string(row.generation), std::to_string(row.evaluations),
                     format_number(row.best_tessac), row.has_feasible ? "1" : "0",
                     format_number(row.best_violation)});
    };

    if (mode == "centralized") {
        const auto res = optimize_centralized(doc.params, bounds, opts);
        write_log(res.log, "incumbent.csv");
        if (!res.feasible) {
            std::fprintf(stderr,
                         "no feasible solution within budget; best violation %.6f\n",
                         res.violation);
            save_solution_config((out / "best_violation.json").string(), doc, res.best,
                                 opts.seed);
            return kExitInfeasible;
        }
        std::printf("best TESSAC: %.3f musd/yr after %lld evaluations\n", res.tessac,
                    static_cast<long long>(res.evaluations_used));
        save_solution_config((out / "solution.json").string(), doc, res.best, opts.seed);
        if (res.evaluation) {
            print_evaluation(doc.params, *res.evaluation);
            write_evaluation_csv((out / "solution_evaluation.csv").string(), doc.params,
                                 *res.evaluation);
        }
        std::printf("wrote %s\n", (out / "solution.json").string().c_str());
        return kExitOk;
    }
    if (mode == "decentralized") {
        if (doc.tessac_refs.empty())
            throw ConfigError(args.config +
                              ": decentralized mode requires 'tessac_references_musd'");
        const auto res = optimize_decentralized_front(doc.params, bounds, doc.tessac_refs, opts);
        write_log(res.log, "front_progress.csv");
        const std::size_t m = doc.params.m();
        CsvWriter front((out / "front.csv").string(), [&] {
            std::string h = "solution,parking_altitude_km,n_parking,slot_reorder_point";
            for (std::size_t j = 1; j <= m; ++j)
                h += ",s" + std::to_string(j) + ",q" + std::to_string(j) + ",oul" +
                     std::to_string(j);
            for (std::size_t j = 1; j <= m; ++j) h += ",y" + std::to_string(j);
            for (std::size_t j = 1; j <= m; ++j) h += ",tessac" + std::to_string(j);
            h += ",tessac_total,feasible";
            return h;
        }());
        for (std::size_t i = 0; i < res.front.size(); ++i) {
            const auto& f = res.front[i];
            std::vector<std::string> cells{std::to_string(i),
                                           format_number(f.design.shared.parking_altitude_km),
                                           std::to_string(f.design.shared.n_parking),
                                           std::to_string(f.design.shared.slot_reorder_point)};
            for (std::size_t j = 0; j < m; ++j) {
                cells.push_back(std::to_string(f.design.inplane[j].reorder_point));
                cells.push_back(std::to_string(f.design.inplane[j].batch_size));
                cells.push_back(std::to_string(f.design.order_up_to[j]));
            }
            for (std::size_t j = 0; j < m; ++j)
                cells.push_back(format_number(f.design.launch_cost_fractions.empty()
                                                  ? 1.0 / m
                                                  : f.design.launch_cost_fractions[j]));
            for (std::size_t j = 0; j < m; ++j) cells.push_back(format_number(f.tessac_per[j]));
            cells.push_back(format_number(f.tessac_total));
            cells.push_back("1");
            front.row(cells);
        }
        std::printf("front size: %zu solutions after %lld evaluations\n", res.front.size(),
                    static_cast<long long>(res.evaluations_used));
        if (!doc.bargaining_weights.empty()) {
            const auto& pick = select_agreement(res.front, doc.bargaining_weights);
            std::printf("agreement for weights (");
            for (std::size_t j = 0; j < m; ++j)
                std::printf("%s%.3g", j ? ", " : "", doc.bargaining_weights[j]);
            std::printf("): TESSAC_j =");
            for (double t : pick.tessac_per) std::printf(" %.3f", t);
            std::printf("\n");
            save_solution_config((out / "agreement.json").string(), doc, pick.design, opts.seed);
        }
        std::printf("wrote %s\n", (out / "front.csv").string().c_str());
        return kExitOk;
    }
    throw ConfigError("unknown mode '" + mode + "' (expected centralized|decentralized)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint replenishment strategies for spare satellites"};
    app.require_subcommand(1);
    GlobalArgs args;
    app.add_option("--seed", args.seed, "RNG seed override (0: use the document's seed)");
    app.add_option("--threads", args.threads, "worker threads (0: all cores)");
    app.add_option("--out-dir", args.out_dir, "output directory")->capture_default_str();

    auto* evalc = app.add_subcommand("evaluate", "analytic evaluation of a concrete design");
    evalc->add_option("--config", args.config, "scenario document")->required();

    double horizon = 20.0;
    int replications = 100;
    bool check_invariants = false;
    bool sampled_leadtime = false;
    auto* simc = app.add_subcommand("simulate", "Monte Carlo simulation of a concrete design");
    simc->add_option("--config", args.config, "scenario document")->required();
    simc->add_option("--horizon", horizon, "years per replication")->capture_default_str();
    simc->add_option("--replications", replications, "replications")->capture_default_str();
    simc->add_flag("--check-invariants", check_invariants, "verify ledger identities per event");
    simc->add_flag("--sampled-leadtime", sampled_leadtime,
                   "sample alignment phases instead of tracking geometry");

    int instances = 0;
    auto* valc = app.add_subcommand("validate", "model-vs-simulation error study");
    valc->add_option("--config", args.config, "scenario document")->required();
    valc->add_option("--instances", instances, "instances per m (0: document value)");
    valc->add_option("--replications", replications, "replications per instance")
        ->capture_default_str();
    valc->add_option("--horizon", horizon, "years per replication")->capture_default_str();

    std::string mode = "centralized";
    std::int64_t budget = 20000;
    int population = 100;
    auto* optc = app.add_subcommand("optimize", "evolutionary strategy search");
    optc->add_option("--config", args.config, "scenario document")->required();
    optc->add_option("--mode", mode, "centralized|decentralized")->capture_default_str();
    optc->add_option("--budget", budget, "candidate evaluation budget")->capture_default_str();
    optc->add_option("--population", population, "population size")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (evalc->parsed()) return cmd_evaluate(args);
        if (simc->parsed())
            return cmd_simulate(args, horizon, replications, check_invariants, sampled_leadtime);
        if (valc->parsed()) return cmd_validate(args, instances, replications, horizon);
        if (optc->parsed()) return cmd_optimize(args, mode, budget, population);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntimeError;
    }
    return kExitInputError;
}
