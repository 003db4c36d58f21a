#include "hypertorus/commands.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypertorus/cohomology.hpp"
#include "hypertorus/io.hpp"
#include "hypertorus/probe.hpp"
#include "hypertorus/report.hpp"
#include "hypertorus/suites.hpp"

namespace hypertorus {
namespace {

/// Sibling CSV path for a JSON output path: swap a .json suffix, otherwise
/// append .csv. Empty stays empty (stdout runs emit JSON only).
std::string csv_sibling(const std::string& out_path) {
    if (out_path.empty()) return {};
    const std::string suffix = ".json";
    if (out_path.size() > suffix.size() &&
        out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return out_path.substr(0, out_path.size() - suffix.size()) + ".csv";
    }
    return out_path + ".csv";
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CircleFunction parse_phi_spec(const std::string& spec, std::string* display) {
    if (spec.empty() || spec == "one" || spec == "1") {
        if (display) *display = "one";
        return CircleFunction::one();
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    int k = 1;
    if (colon != std::string::npos) {
        const std::string arg = spec.substr(colon + 1);
        try {
            std::size_t used = 0;
            k = std::stoi(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad circle-function spec: " + spec);
        }
    }
    if (k < 1 || k > 8) {
        throw std::invalid_argument("circle-function harmonic out of range [1,8]: " + spec);
    }
    if (kind == "cos") {
        if (display) *display = "cos:" + std::to_string(k);
        return CircleFunction::cosine(k);
    }
    if (kind == "sin") {
        if (display) *display = "sin:" + std::to_string(k);
        return CircleFunction::sine(k);
    }
    throw std::invalid_argument("unknown circle-function spec: " + spec +
                                " (expected one, cos:k or sin:k)");
}

int cmd_verify(const RunConfig& cfg) {
    validate(cfg);
    apply_threads(cfg);
    const SuiteReport rep = run_suite(cfg);
    emit_report(cfg.out_path, render_suite_report(cfg, rep, !cfg.no_timings));
    const std::string csv = csv_sibling(cfg.out_path);
    if (!csv.empty()) emit_report(csv, render_suite_csv(rep));
    return rep.all_pass() ? 0 : 2;
}

int cmd_probe(const RunConfig& cfg, const std::string& target, const std::string& phi_spec) {
    validate(cfg);
    apply_threads(cfg);
    const HyperbolicGluing g = make_gluing(cfg);
    const int p = cfg.fd_order;

    std::string phi_name = "one";
    TargetBuilder builder;
    std::string expected;
    if (target == "h1") {
        const CircleFunction phi = parse_phi_spec(phi_spec, &phi_name);
        builder = [phi, g, p](GridShape shape) { return generator_h1(phi, g, shape, p).eta; };
        expected = "OBSTRUCTED";
    } else if (target == "h2") {
        const CircleFunction phi = parse_phi_spec(phi_spec, &phi_name);
        builder = [phi, g, p](GridShape shape) { return generator_h2(phi, g, shape, p).eta; };
        expected = "OBSTRUCTED";
    } else if (target == "exact-control") {
        // A constructed-exact degree-2 target: the twisted coboundary of a
        // random band-limited 1-form. The analytic description is sampled
        // per level, so every refinement sees the same form.
        phi_name = "-";
        Rng rng(cfg.seed + 7);
        SynthOptions opt;
        opt.max_abs_k = 5;
        opt.circle_band = 2;
        std::vector<FieldSpec> comps;
        for (int c = 0; c < 3; ++c) comps.push_back(random_field_spec(g, rng, opt));
        builder = [comps, g, p](GridShape shape) {
            std::vector<ScalarField> fields;
            fields.reserve(comps.size());
            for (const auto& spec : comps) fields.push_back(sample_spec(spec, g, shape));
            return coboundary_T(FrameForm(1, std::move(fields)), p);
        };
        expected = "EXACT-LIKE";
    } else {
        throw std::invalid_argument("unknown probe target: " + target +
                                    " (expected h1, h2 or exact-control)");
    }

    const ProbeReport rep = exactness_probe(builder, p, make_probe_budget(cfg),
                                            cfg.probe_thresholds, cfg.probe_levels);
    emit_report(cfg.out_path, render_probe_report(cfg, target, phi_name, rep, !cfg.no_timings));
    const std::string csv = csv_sibling(cfg.out_path);
    if (!csv.empty()) emit_report(csv, render_probe_csv(rep));
    return rep.verdict == expected ? 0 : 3;
}

int cmd_primitive(const RunConfig& cfg) {
    validate(cfg);
    apply_threads(cfg);
    if (cfg.field_in.empty()) {
        throw std::invalid_argument("primitive needs an input field file (--in)");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarField f = read_field(cfg.field_in);
    if (f.slab()) {
        throw std::invalid_argument("primitive requires a glued quotient field, got slab data: " +
                                    cfg.field_in);
    }
    // The input file fixes the geometry; mirror it into the echoed config so
    // the report describes the actual computation.
    RunConfig actual = cfg;
    actual.matrix = f.gluing().matrix().m;
    actual.grid_n = f.shape().N;
    actual.n_slices = f.shape().n_slices;
    validate(actual);
    const H3Result res = h3_primitive(f, actual.fd_order, actual.h3_floor);
    emit_report(actual.out_path,
                render_primitive_report(actual, res, !actual.no_timings, elapsed_since(t0)));
    return 0;
}

int cmd_orbit(const RunConfig& cfg) {
    validate(cfg);
    apply_threads(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const HyperbolicGluing g = make_gluing(cfg);
    Rng rng(cfg.seed + 11);
    const std::array<double, 3> base{rng.uniform(), rng.uniform(), rng.uniform()};
    const OrbitReport rep =
        orbit_discrepancy(g, base, cfg.orbit_s, cfg.orbit_k, cfg.orbit_samples_per_unit);
    emit_report(cfg.out_path, render_orbit_report(cfg, rep, !cfg.no_timings, elapsed_since(t0)));
    return 0;
}

}  // namespace hypertorus
