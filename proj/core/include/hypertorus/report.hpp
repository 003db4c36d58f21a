#pragma once

#include <string>
#include <vector>

#include "hypertorus/cohomology.hpp"
#include "hypertorus/config.hpp"
#include "hypertorus/probe.hpp"
#include "hypertorus/scalar_field.hpp"

namespace hypertorus {

/// One named check with its measured value, the tolerance pinned for it and
/// the resulting verdict. `measured <= tolerance` is the generic reading;
/// rows that encode a band or ratio test say so in their name.
struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRow> rows;
    double seconds = 0.0;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// JSON documents, schema_version 1. Field order is fixed (insertion order),
/// so identical inputs give byte-identical text; with timings=false every
/// wall-clock field is omitted, which is what the determinism contract
/// compares. All render into the returned string with a trailing newline.
std::string render_suite_report(const RunConfig& cfg, const SuiteReport& report, bool timings);
std::string render_probe_report(const RunConfig& cfg, const std::string& target,
                                const std::string& phi, const ProbeReport& report, bool timings);
/// Residual curve as CSV: header "level,N,residual", one row per level.
std::string render_probe_csv(const ProbeReport& report);
/// Check rows as CSV: header "name,measured,tolerance,pass".
std::string render_suite_csv(const SuiteReport& report);
std::string render_primitive_report(const RunConfig& cfg, const H3Result& result, bool timings,
                                    double seconds);
std::string render_orbit_report(const RunConfig& cfg, const OrbitReport& report, bool timings,
                                double seconds);

/// Writes `text` to `path`, or to stdout when `path` is empty.
void emit_report(const std::string& path, const std::string& text);

}  // namespace hypertorus
