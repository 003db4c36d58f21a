#include "hypertorus/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json.hpp"

namespace hypertorus {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json inputs_json(const RunConfig& cfg) {
    ordered_json j;
    j["matrix"] = cfg.matrix;
    j["N"] = cfg.grid_n;
    j["N_t"] = cfg.n_slices;
    j["fd_order"] = cfg.fd_order;
    j["quad_order"] = cfg.quad_order;
    j["quad_panels"] = cfg.quad_panels;
    j["seed"] = cfg.seed;
    j["paper_sign"] = cfg.paper_sign;
    j["exact_average"] = cfg.exact_average;
    return j;
}

ordered_json document(const RunConfig& cfg, const char* kind) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    j["inputs"] = inputs_json(cfg);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string render_suite_report(const RunConfig& cfg, const SuiteReport& report, bool timings) {
    ordered_json j = document(cfg, "suite");
    j["suite"] = report.suite;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["name"] = r.name;
        row["measured"] = r.measured;
        row["tolerance"] = r.tolerance;
        row["pass"] = r.pass;
        rows.push_back(std::move(row));
    }
    j["checks"] = std::move(rows);
    j["all_pass"] = report.all_pass();
    if (timings) j["timings"] = ordered_json{{"seconds", report.seconds}};
    return dump(j);
}

std::string render_probe_report(const RunConfig& cfg, const std::string& target,
                                const std::string& phi, const ProbeReport& report,
                                bool timings) {
    ordered_json j = document(cfg, "probe");
    j["target"] = target;
    j["phi"] = phi;
    j["target_norm"] = report.target_norm;
    ordered_json levels = ordered_json::array();
    for (const auto& lv : report.levels) {
        ordered_json row;
        row["N"] = lv.N;
        row["N_t"] = lv.n_slices;
        row["relative_residual"] = lv.relative_residual;
        row["iterations"] = lv.iterations;
        row["stop_reason"] = lv.stop_reason;
        levels.push_back(std::move(row));
    }
    j["levels"] = std::move(levels);
    j["verdict"] = report.verdict;
    j["thresholds"] = ordered_json{{"exact_like", report.thresholds.exact_like},
                                   {"plateau", report.thresholds.plateau},
                                   {"ratio", report.thresholds.ratio}};
    j["budget_exhausted"] = report.budget_exhausted;
    if (timings) j["timings"] = ordered_json{{"seconds", report.seconds}};
    return dump(j);
}

std::string render_probe_csv(const ProbeReport& report) {
    std::string out = "level,N,residual\n";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(report.levels[i].N);
        out += ',';
        out += csv_double(report.levels[i].relative_residual);
        out += '\n';
    }
    return out;
}

std::string render_suite_csv(const SuiteReport& report) {
    std::string out = "name,measured,tolerance,pass\n";
    for (const auto& r : report.rows) {
        std::string name = r.name;
        for (char& c : name)
            if (c == ',') c = ';';
        out += name;
        out += ',';
        out += csv_double(r.measured);
        out += ',';
        out += csv_double(r.tolerance);
        out += ',';
        out += r.pass ? "1" : "0";
        out += '\n';
    }
    return out;
}

std::string render_primitive_report(const RunConfig& cfg, const H3Result& result, bool timings,
                                    double seconds) {
    ordered_json j = document(cfg, "primitive");
    j["mean_value"] = ordered_json{{"re", result.c.real()}, {"im", result.c.imag()}};
    j["relative_residual"] = result.report.relative_residual;
    j["floor"] = result.report.floor;
    j["fallback_count"] = result.report.fallback_count;
    ordered_json flagged = ordered_json::array();
    for (const auto& f : result.report.flagged)
        flagged.push_back(ordered_json{{"k1", f[0]}, {"k2", f[1]}, {"slice", f[2]}});
    j["flagged_modes"] = std::move(flagged);
    const auto& st = result.report.stats;
    j["small_denominators"] =
        ordered_json{{"K", st.K},
                     {"min_abs", st.min_abs},
                     {"worst_mode", st.worst_mode},
                     {"log10_histogram_lo", SmallDenominatorStats::hist_lo},
                     {"log10_histogram", st.histogram}};
    if (timings) j["timings"] = ordered_json{{"seconds", seconds}};
    return dump(j);
}

std::string render_orbit_report(const RunConfig& cfg, const OrbitReport& report, bool timings,
                                double seconds) {
    ordered_json j = document(cfg, "orbit");
    j["S"] = report.S;
    j["K"] = report.K;
    j["samples"] = report.samples;
    j["base"] = report.base;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows)
        rows.push_back(ordered_json{{"k1", r.k1}, {"k2", r.k2}, {"magnitude", r.magnitude}});
    j["weyl_sums"] = std::move(rows);
    j["max_weyl"] = report.max_weyl;
    j["worst_k"] = ordered_json::array({report.worst_k1, report.worst_k2});
    if (timings) j["timings"] = ordered_json{{"seconds", seconds}};
    return dump(j);
}

void emit_report(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace hypertorus
