#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparesat/generate.hpp"
#include "sparesat/optimize.hpp"
#include "sparesat/scenario.hpp"

namespace sparesat {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation-study section: which m values to sweep and the sampling document.
struct ValidationConfig {
    std::vector<int> m_values{2, 3};
    int instances_per_m = 10;
    ValidationRanges ranges;
    CommonParams common;
};

// Parsed scenario document. Field names carry explicit units; the schema is versioned.
struct ScenarioDocument {
    int schema_version = 1;
    ScenarioParams params;
    std::optional<StrategyDesign> design;
    std::optional<DesignBounds> bounds;
    std::vector<double> tessac_refs;
    std::vector<double> bargaining_weights;
    std::optional<ValidationConfig> validation;
    std::uint64_t seed = 1;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(where + ": missing required field '" + key + "'");
    return *it;
}

template <typename T>
T get_as(const json& j, const char* key, const std::string& where) {
    try {
        return require(j, key, where).get<T>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(where + ": field '" + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return it->get<T>();
}

inline ConstellationSpec parse_constellation(const json& j, const std::string& where) {
    ConstellationSpec c;
    c.name = get_or<std::string>(j, "name", "");
    c.plane_altitude_km = get_as<double>(j, "plane_altitude_km", where);
    c.n_planes = get_as<int>(j, "n_planes", where);
    c.sats_per_plane = get_as<int>(j, "sats_per_plane", where);
    c.sat_failure_rate_per_year = get_as<double>(j, "sat_failure_rate_per_year", where);
    c.shipping_size_slots = get_as<int>(j, "shipping_size_slots", where);
    c.dry_mass_kg = get_as<double>(j, "dry_mass_kg", where);
    c.mass_flow_rate_kg_s = get_as<double>(j, "mass_flow_rate_kg_per_s", where);
    c.exhaust_velocity_km_s = get_as<double>(j, "exhaust_velocity_km_per_s", where);
    c.manufac_cost_musd = get_as<double>(j, "manufacturing_cost_musd_per_sat", where);
    c.holding_cost_musd_per_sat_year = get_as<double>(j, "holding_cost_musd_per_sat_per_year", where);
    c.fuel_cost_musd_per_kg = get_as<double>(j, "fuel_cost_musd_per_kg", where);
    return c;
}

inline IntRange parse_int_range(const json& j, const char* key, const std::string& where) {
    const json& r = require(j, key, where);
    return IntRange{get_as<int>(r, "min", where + '/' + key), get_as<int>(r, "max", where + '/' + key)};
}

inline RealRange parse_real_range(const json& j, const char* key, const std::string& where) {
    const json& r = require(j, key, where);
    return RealRange{get_as<double>(r, "min", where + '/' + key),
                     get_as<double>(r, "max", where + '/' + key)};
}

}  // namespace detail

inline ScenarioDocument load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    using detail::get_as;
    using detail::get_or;
    using detail::require;

    ScenarioDocument doc;
    doc.schema_version = get_as<int>(root, "schema_version", path);
    if (doc.schema_version != 1)
        throw ConfigError(path + ": unsupported schema_version " +
                          std::to_string(doc.schema_version));
    doc.seed = get_or<std::uint64_t>(root, "rng_seed", 1);
    doc.params.n_t = get_as<int>(root, "time_units_per_year", path);
    doc.params.inclination_deg = get_as<double>(root, "inclination_deg", path);
    doc.params.fill_rate_requirement = get_or<double>(root, "fill_rate_requirement", 0.98);

    const auto& jc = require(root, "constellations", path);
    if (!jc.is_array() || jc.empty())
        throw ConfigError(path + ": 'constellations' must be a nonempty array");
    for (std::size_t i = 0; i < jc.size(); ++i)
        doc.params.constellations.push_back(detail::parse_constellation(
            jc[i], path + ": constellations[" + std::to_string(i) + "]"));
    const std::size_t m = doc.params.constellations.size();

    const auto& jl = require(root, "launcher", path);
    doc.params.launcher.launch_cost_musd = get_as<double>(jl, "launch_cost_musd", path);
    doc.params.launcher.capacity_slots = get_as<int>(jl, "capacity_slots", path);
    doc.params.launcher.order_processing_time =
        get_as<double>(jl, "order_processing_time_units", path);
    doc.params.launcher.mean_wait = get_as<double>(jl, "mean_launch_wait_time_units", path);

    if (root.contains("design")) {
        const auto& jd = root["design"];
        StrategyDesign d;
        d.shared.parking_altitude_km = get_as<double>(jd, "parking_altitude_km", path);
        d.shared.n_parking = get_as<int>(jd, "n_parking_orbits", path);
        d.shared.slot_reorder_point = get_as<int>(jd, "slot_reorder_point", path);
        const auto& jp = require(jd, "policies", path);
        if (jp.size() != m)
            throw ConfigError(path + ": 'design.policies' must list one entry per constellation");
        for (const auto& p : jp) {
            d.inplane.push_back({get_as<int>(p, "reorder_point_sats", path),
                                 get_as<int>(p, "batch_size_sats", path)});
            d.order_up_to.push_back(get_as<int>(p, "order_up_to_batches", path));
        }
        d.launch_cost_fractions =
            get_or<std::vector<double>>(jd, "launch_cost_fractions", {});
        doc.design = std::move(d);
    }

    if (root.contains("bounds")) {
        const auto& jb = root["bounds"];
        DesignBounds b;
        const auto& ja = detail::require(jb, "parking_altitude_km", path);
        const double lo = get_as<double>(ja, "min", path);
        const double hi = get_as<double>(ja, "max", path);
        const double step = get_or<double>(ja, "step_km", 50.0);
        if (!(step > 0.0) || hi < lo)
            throw ConfigError(path + ": invalid parking altitude bounds");
        for (double h = lo; h <= hi + 1e-9; h += step) b.parking_altitudes_km.push_back(h);
        const IntRange np = detail::parse_int_range(jb, "n_parking_orbits", path);
        b.n_parking = {np.lo, np.hi};
        const IntRange ur = detail::parse_int_range(jb, "slot_reorder_point", path);
        b.slot_reorder_point = {ur.lo, ur.hi};
        const IntBound s = [&] {
            auto r = detail::parse_int_range(jb, "reorder_point_sats", path);
            return IntBound{r.lo, r.hi};
        }();
        IntBound q{get_as<int>(require(jb, "batch_size_sats", path), "min", path), 0};
        if (require(jb, "batch_size_sats", path).contains("max") &&
            !require(jb, "batch_size_sats", path)["max"].is_string())
            q.hi = require(jb, "batch_size_sats", path)["max"].get<int>();
        const IntBound S = [&] {
            auto r = detail::parse_int_range(jb, "order_up_to_batches", path);
            return IntBound{r.lo, r.hi};
        }();
        b.reorder_point.assign(m, s);
        b.batch_size.assign(m, q);
        b.order_up_to.assign(m, S);
        doc.bounds = std::move(b);
    }

    doc.tessac_refs = get_or<std::vector<double>>(root, "tessac_references_musd", {});
    doc.bargaining_weights = get_or<std::vector<double>>(root, "bargaining_weights", {});

    if (root.contains("validation")) {
        const auto& jv = root["validation"];
        ValidationConfig v;
        v.m_values = get_or<std::vector<int>>(jv, "m_values", {2, 3});
        v.instances_per_m = get_or<int>(jv, "instances_per_m", 10);
        if (jv.contains("ranges")) {
            const auto& jr = jv["ranges"];
            const std::string where = path + ": validation.ranges";
            v.ranges.order_processing_time =
                detail::parse_real_range(jr, "order_processing_time_units", where);
            v.ranges.mean_wait = detail::parse_real_range(jr, "mean_launch_wait_time_units", where);
            v.ranges.inclination_deg = detail::parse_real_range(jr, "inclination_deg", where);
            v.ranges.sat_failure_rate =
                detail::parse_real_range(jr, "sat_failure_rate_per_year", where);
            v.ranges.n_planes = detail::parse_int_range(jr, "n_planes", where);
            v.ranges.n_parking = detail::parse_int_range(jr, "n_parking_orbits", where);
            v.ranges.sats_per_plane = detail::parse_int_range(jr, "sats_per_plane", where);
            v.ranges.plane_altitude_km = detail::parse_real_range(jr, "plane_altitude_km", where);
            v.ranges.parking_altitude_km =
                detail::parse_real_range(jr, "parking_altitude_km", where);
            v.ranges.reorder_point = detail::parse_int_range(jr, "reorder_point_sats", where);
            v.ranges.batch_size = detail::parse_int_range(jr, "batch_size_sats", where);
            v.ranges.order_up_to = detail::parse_int_range(jr, "order_up_to_batches", where);
            v.ranges.slot_reorder_point = detail::parse_int_range(jr, "slot_reorder_point", where);
            v.ranges.shipping_size = detail::parse_int_range(jr, "shipping_size_slots", where);
        }
        if (jv.contains("common")) {
            const auto& jo = jv["common"];
            v.common.fuel_cost_musd_per_kg =
                get_or<double>(jo, "fuel_cost_musd_per_kg", v.common.fuel_cost_musd_per_kg);
            v.common.holding_cost_musd_per_sat_year = get_or<double>(
                jo, "holding_cost_musd_per_sat_per_year", v.common.holding_cost_musd_per_sat_year);
            v.common.exhaust_velocity_km_s =
                get_or<double>(jo, "exhaust_velocity_km_per_s", v.common.exhaust_velocity_km_s);
            v.common.launch_cost_musd =
                get_or<double>(jo, "launch_cost_musd", v.common.launch_cost_musd);
            v.common.capacity_slots = get_or<int>(jo, "capacity_slots", v.common.capacity_slots);
            v.common.dry_mass_per_slot_kg =
                get_or<double>(jo, "dry_mass_per_slot_kg", v.common.dry_mass_per_slot_kg);
            v.common.mass_flow_per_slot_kg_s = get_or<double>(jo, "mass_flow_per_slot_kg_per_s",
                                                               v.common.mass_flow_per_slot_kg_s);
            v.common.manufac_cost_per_slot_musd = get_or<double>(
                jo, "manufacturing_cost_per_slot_musd", v.common.manufac_cost_per_slot_musd);
            v.common.n_t = doc.params.n_t;
        }
        doc.validation = std::move(v);
    }
    return doc;
}

// Re-emit a scenario document with a concrete design filled in; the output is a valid
// input for the evaluate command.
inline void save_solution_config(const std::string& path, const ScenarioDocument& base,
                                 const StrategyDesign& design, std::uint64_t seed) {
    nlohmann::json root;
    root["schema_version"] = 1;
    root["rng_seed"] = seed;
    root["time_units_per_year"] = base.params.n_t;
    root["inclination_deg"] = base.params.inclination_deg;
    root["fill_rate_requirement"] = base.params.fill_rate_requirement;
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : base.params.constellations) {
        nlohmann::json j;
        j["name"] = c.name;
        j["plane_altitude_km"] = c.plane_altitude_km;
        j["n_planes"] = c.n_planes;
        j["sats_per_plane"] = c.sats_per_plane;
        j["sat_failure_rate_per_year"] = c.sat_failure_rate_per_year;
        j["shipping_size_slots"] = c.shipping_size_slots;
        j["dry_mass_kg"] = c.dry_mass_kg;
        j["mass_flow_rate_kg_per_s"] = c.mass_flow_rate_kg_s;
        j["exhaust_velocity_km_per_s"] = c.exhaust_velocity_km_s;
        j["manufacturing_cost_musd_per_sat"] = c.manufac_cost_musd;
        j["holding_cost_musd_per_sat_per_year"] = c.holding_cost_musd_per_sat_year;
        j["fuel_cost_musd_per_kg"] = c.fuel_cost_musd_per_kg;
        jc.push_back(std::move(j));
    }
    root["constellations"] = std::move(jc);
    root["launcher"] = {
        {"launch_cost_musd", base.params.launcher.launch_cost_musd},
        {"capacity_slots", base.params.launcher.capacity_slots},
        {"order_processing_time_units", base.params.launcher.order_processing_time},
        {"mean_launch_wait_time_units", base.params.launcher.mean_wait}};
    nlohmann::json jd;
    jd["parking_altitude_km"] = design.shared.parking_altitude_km;
    jd["n_parking_orbits"] = design.shared.n_parking;
    jd["slot_reorder_point"] = design.shared.slot_reorder_point;
    nlohmann::json jp = nlohmann::json::array();
    for (std::size_t j = 0; j < design.inplane.size(); ++j)
        jp.push_back({{"reorder_point_sats", design.inplane[j].reorder_point},
                      {"batch_size_sats", design.inplane[j].batch_size},
                      {"order_up_to_batches", design.order_up_to[j]}});
    jd["policies"] = std::move(jp);
    if (!design.launch_cost_fractions.empty())
        jd["launch_cost_fractions"] = design.launch_cost_fractions;
    root["design"] = std::move(jd);

    std::ofstream out(path);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    out << root.dump(2) << '\n';
}

// --- CSV emission -------------------------------------------------------------

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error(path + ": cannot open for writing");
        out_ << header << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline void write_evaluation_csv(const std::string& path, const ScenarioParams& params,
                                 const EvaluationResult& result) {
    CsvWriter csv(path, "parameter,constellation,value,units");
    auto num = format_number;
    for (std::size_t j = 0; j < result.per.size(); ++j) {
        const auto& pe = result.per[j];
        const std::string cj = std::to_string(j + 1);
        csv.row({"lambda_plane", cj, num(pe.lambda_plane), "satellites/unit/plane"});
        csv.row({"lambda_parking", cj, num(pe.lambda_parking), "batches/unit/orbit"});
        csv.row({"n_plane", cj, num(pe.n_plane), "orders/unit/plane"});
        csv.row({"delta_v", cj, num(pe.delta_v_km_s), "km/s"});
        csv.row({"fuel_mass", cj, num(pe.fuel_kg), "kg"});
        csv.row({"transfer_time", cj, num(pe.transfer_time), "units"});
        csv.row({"es_plane", cj, num(pe.es_plane), "satellites/cycle"});
        csv.row({"rho_plane", cj, num(pe.rho_plane), "-"});
        csv.row({"sl_plane", cj, num(pe.sl_plane), "satellites"});
        csv.row({"es_parking", cj, num(pe.es_parking), "batches/cycle"});
        csv.row({"eq_parking", cj, num(pe.eq_parking), "batches/order"});
        csv.row({"rho_parking", cj, num(pe.rho_parking), "-"});
        csv.row({"sl_parking", cj, num(pe.sl_parking), "batches"});
        csv.row({"holding_cost", cj, num(result.costs.holding[j]), "musd/yr"});
        csv.row({"maneuvering_cost", cj, num(result.costs.maneuvering[j]), "musd/yr"});
        csv.row({"manufacturing_cost", cj, num(result.costs.manufacturing[j]), "musd/yr"});
        csv.row({"launch_cost_fraction", cj, num(result.costs.fractions[j]), "-"});
        csv.row({"tessac", cj, num(result.costs.tessac_per[j]), "musd/yr"});
    }
    csv.row({"lambda_parking_total", "-", num(result.lambda_parking_total), "batches/unit/orbit"});
    csv.row({"n_parking", "-", num(result.n_parking), "orders/unit/orbit"});
    csv.row({"chain_states", "-", std::to_string(result.chain_states), "states"});
    csv.row({"launch_cost", "-", num(result.costs.launch_total), "musd/yr"});
    csv.row({"tessac_total", "-", num(result.costs.tessac_total), "musd/yr"});
    (void)params;
}

}  // namespace sparesat
