// focalis: Frenet frames, focal curves, events and verification for curves
// in R^{m+1}, plus focal-surface meshes in R^3.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "focalis/curve.hpp"
#include "focalis/errors.hpp"
#include "focalis/events.hpp"
#include "focalis/focal.hpp"
#include "focalis/frenet.hpp"
#include "focalis/verify.hpp"

namespace {

using namespace focalis;
using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunConfig {
    std::string input;
    std::string builtin_name;
    std::string output;
    std::string format;  // empty = per-command default
    int samples = 512;
    int order = -1;
    double tol = 1e-6;
};

CurveModel load_curve(const RunConfig& cfg) {
    if (!cfg.builtin_name.empty()) return builtin(cfg.builtin_name);
    if (!cfg.input.empty()) return parse_curve_file(cfg.input);
    throw IoError("no curve given: use --input <file> or --builtin <name>");
}

std::string curve_id(const RunConfig& cfg, const CurveModel& curve) {
    if (!curve.label.empty()) return curve.label;
    if (!cfg.builtin_name.empty()) return cfg.builtin_name;
    return cfg.input;
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) throw IoError("cannot open output file: " + cfg.output);
    os << text;
    if (!os.flush()) throw IoError("failed writing output file: " + cfg.output);
}

// focal_curve with a better message when the frame degenerates: report the
// first grid point where the derivatives fail to be independent.
std::vector<FocalSample> sampled(const CurveModel& curve, const RunConfig& cfg) {
    try {
        return focal_curve(curve, cfg.samples, cfg.order);
    } catch (const NotGoodCurve&) {
        for (double th : sample_grid(curve, cfg.samples)) {
            const GoodnessReport g = is_good(curve.eval_jet(th, curve.m() + 1), curve.m());
            if (!g.is_good)
                throw NotGoodCurve("curve is not good at theta=" + fmt17(th) +
                                   " (derivatives linearly dependent)");
        }
        throw;
    }
}

std::string format_or(const RunConfig& cfg, const char* dflt) {
    return cfg.format.empty() ? dflt : cfg.format;
}

int cmd_builtins(const RunConfig& cfg) {
    std::string out;
    if (format_or(cfg, "csv") == "json") {
        ordered_json j = ordered_json::array();
        for (const std::string& n : builtin_names()) j.push_back(n);
        out = j.dump(2) + "\n";
    } else {
        for (const std::string& n : builtin_names()) out += n + "\n";
        out +=
            "# seeded generators accept name:seed, e.g. random_poly_r4:7\n";
    }
    write_output(cfg, out);
    return 0;
}

ordered_json frame_row_json(const FocalSample& r) {
    ordered_json row;
    row["theta"] = r.theta;
    row["s"] = r.s;
    row["speed"] = r.frenet.speed;
    row["frame"] = r.frenet.frame;
    row["curvatures"] = r.frenet.curvatures;
    return row;
}

int cmd_frame(const RunConfig& cfg) {
    const CurveModel curve = load_curve(cfg);
    const int m = curve.m(), d = m + 1;
    const std::vector<FocalSample> rows = sampled(curve, cfg);

    if (format_or(cfg, "csv") == "json") {
        ordered_json j;
        j["curve"] = curve_id(cfg, curve);
        j["rows"] = ordered_json::array();
        for (const FocalSample& r : rows) j["rows"].push_back(frame_row_json(r));
        write_output(cfg, j.dump(2) + "\n");
        return 0;
    }

    std::string out = "theta,s,speed";
    for (int j = 0; j < d; ++j) out += ",t_" + std::to_string(j);
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j < d; ++j) out += ",n" + std::to_string(i) + "_" + std::to_string(j);
    for (int i = 1; i <= m; ++i) out += ",kappa_" + std::to_string(i);
    out += "\n";
    for (const FocalSample& r : rows) {
        out += fmt17(r.theta) + "," + fmt17(r.s) + "," + fmt17(r.frenet.speed);
        for (const VecD& row : r.frenet.frame)
            for (double v : row) out += "," + fmt17(v);
        for (double k : r.frenet.curvatures) out += "," + fmt17(k);
        out += "\n";
    }
    write_output(cfg, out);
    return 0;
}

int cmd_focal(const RunConfig& cfg) {
    const CurveModel curve = load_curve(cfg);
    const int m = curve.m(), d = m + 1;
    const std::vector<FocalSample> rows = sampled(curve, cfg);

    if (format_or(cfg, "csv") == "json") {
        ordered_json j;
        j["curve"] = curve_id(cfg, curve);
        j["rows"] = ordered_json::array();
        for (const FocalSample& r : rows) {
            ordered_json row = frame_row_json(r);
            row["point"] = r.point;
            row["at_infinity"] = r.flattening;
            if (r.flattening) {
                row["center"] = nullptr;
                row["focal_curvatures"] = nullptr;
                row["radii"] = nullptr;
                row["vertex_residual"] = nullptr;
            } else {
                row["center"] = r.focal.center;
                row["focal_curvatures"] = r.focal.focal_curvatures;
                row["radii"] = r.focal.radii;
                row["vertex_residual"] = r.focal.vertex_residual;
            }
            j["rows"].push_back(std::move(row));
        }
        write_output(cfg, j.dump(2) + "\n");
        return 0;
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::string out = "theta,s,speed";
    for (int j = 0; j < d; ++j) out += ",gamma_" + std::to_string(j);
    for (int j = 0; j < d; ++j) out += ",C_" + std::to_string(j);
    for (int i = 1; i <= m; ++i) out += ",c_" + std::to_string(i);
    for (int i = 1; i <= m; ++i) out += ",R_" + std::to_string(i);
    out += ",vertex_residual,at_infinity\n";
    for (const FocalSample& r : rows) {
        out += fmt17(r.theta) + "," + fmt17(r.s) + "," + fmt17(r.frenet.speed);
        for (double v : r.point) out += "," + fmt17(v);
        for (int j = 0; j < d; ++j) out += "," + fmt17(r.flattening ? inf : r.focal.center[static_cast<size_t>(j)]);
        for (int i = 0; i < m; ++i) out += "," + fmt17(r.flattening ? inf : r.focal.focal_curvatures[static_cast<size_t>(i)]);
        for (int i = 0; i < m; ++i) out += "," + fmt17(r.flattening ? inf : r.focal.radii[static_cast<size_t>(i)]);
        out += "," + fmt17(r.flattening ? inf : r.focal.vertex_residual);
        out += r.flattening ? ",1\n" : ",0\n";
    }
    write_output(cfg, out);
    return 0;
}

int cmd_events(const RunConfig& cfg) {
    const CurveModel curve = load_curve(cfg);
    const EventReport rep = classify_critical_radii(scan_events(curve, cfg.samples));

    if (format_or(cfg, "json") == "csv") {
        std::string out = "kind,l,theta,residual,refined,double_root,annotations\n";
        for (const Event& e : rep.events) {
            std::string ann;
            for (size_t i = 0; i < e.annotations.size(); ++i)
                ann += (i ? "; " : "") + e.annotations[i];
            out += std::string(event_kind_name(e.kind)) + "," + std::to_string(e.l) + "," +
                   fmt17(e.theta) + "," + fmt17(e.residual) + "," + (e.refined ? "1" : "0") + "," +
                   (e.double_root ? "1" : "0") + ",\"" + ann + "\"\n";
        }
        write_output(cfg, out);
        return 0;
    }

    ordered_json j;
    j["curve"] = curve_id(cfg, curve);
    j["samples"] = cfg.samples;
    j["counts"] = {{"vertices", rep.vertices},
                   {"pseudo_vertices", rep.pseudo_vertices},
                   {"flattenings", rep.flattenings}};
    if (curve.periodic) {
        const int vp = rep.vertices + rep.pseudo_vertices;
        j["closed_curve_inequalities"] = {{"v_plus_p_ge_2", vp >= 2},
                                          {"v_plus_p_ge_f", vp >= rep.flattenings}};
    } else {
        j["closed_curve_inequalities"] = nullptr;
    }
    j["channels"] = ordered_json::array();
    for (const ChannelStatus& c : rep.channels) {
        j["channels"].push_back({{"name", c.name},
                                 {"identically_zero", c.identically_zero},
                                 {"no_valid_samples", c.no_valid_samples},
                                 {"max_abs", c.max_abs},
                                 {"scale", c.scale},
                                 {"excluded_samples", c.excluded_samples}});
    }
    j["warnings"] = rep.warnings;
    j["events"] = ordered_json::array();
    for (const Event& e : rep.events) {
        ordered_json ev;
        ev["kind"] = event_kind_name(e.kind);
        if (e.kind == EventKind::CriticalRadius) ev["l"] = e.l;
        ev["theta"] = e.theta;
        ev["residual"] = e.residual;
        ev["refined"] = e.refined;
        ev["double_root"] = e.double_root;
        ev["focal_curvatures"] = e.c_values;
        ev["annotations"] = e.annotations;
        j["events"].push_back(std::move(ev));
    }
    write_output(cfg, j.dump(2) + "\n");
    return 0;
}

ordered_json suite_json(const ResidualReport& rep, double tol, bool* all_pass) {
    ordered_json j;
    j["name"] = rep.name;
    j["samples_kept"] = rep.residuals.size();
    j["skipped"] = rep.skipped;
    j["max_abs"] = rep.max_abs;
    j["scale"] = rep.scale;
    const double rel = rep.scale > 0.0 ? rep.max_abs / rep.scale : rep.max_abs;
    j["relative_max"] = rel;
    bool pass = rel <= tol;
    if (rep.residuals.empty()) pass = true;  // nothing testable, nothing violated
    j["pass"] = pass;
    j["notes"] = rep.notes;
    if (all_pass && !pass) *all_pass = false;
    return j;
}

int cmd_verify(const RunConfig& cfg) {
    const CurveModel curve = load_curve(cfg);
    const int n = cfg.samples;
    bool all_pass = true;

    const SphericalReport sph = check_spherical(curve, n);

    ordered_json j;
    j["curve"] = curve_id(cfg, curve);
    j["samples"] = n;
    j["tolerance"] = cfg.tol;

    j["suites"] = ordered_json::array();
    j["suites"].push_back(suite_json(check_scalar_frenet(curve, n, !sph.is_spherical), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_curvature_formula(curve, n), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_focal_frame_ratios(curve, n), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_radius_derivative_identity(curve, n), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_recursive_consistency(curve, n), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_flag_nesting(curve, n), cfg.tol, &all_pass));
    j["suites"].push_back(suite_json(check_focal_flag(curve, n), cfg.tol, &all_pass));

    {
        ordered_json s;
        s["is_spherical"] = sph.is_spherical;
        s["radius_constant"] = sph.radius_constant;
        s["max_abs"] = sph.residual.max_abs;
        s["scale"] = sph.residual.scale;
        s["m2_form_agreement"] = sph.m2_form_agreement;  // null (NaN) unless m = 2
        s["fitted_center"] = sph.fitted_center;
        s["fitted_radius"] = sph.fitted_radius;
        s["fit_residual"] = sph.fit_residual;
        s["notes"] = sph.notes;
        j["spherical"] = std::move(s);
    }
    {
        const SelfCongruentReport sc = check_self_congruent(curve, n);
        ordered_json s;
        s["applicable"] = sc.applicable;
        if (sc.applicable) {
            const bool pass = sc.residual.max_abs <= cfg.tol;
            s["max_abs"] = sc.residual.max_abs;
            s["pass"] = pass;
            if (!pass) all_pass = false;
        }
        s["notes"] = sc.residual.notes;
        j["self_congruent"] = std::move(s);
    }
    {
        const RadiusCriticalReport rc = check_critical_radius_match(curve, n);
        ordered_json s;
        s["holds"] = rc.holds;
        s["worst_mismatch"] = rc.worst_mismatch;
        s["radius_extrema_found"] = rc.radius_zero_count;
        s["factor_zeros_found"] = rc.factor_zero_count;
        s["min_c1"] = rc.min_c1;
        s["notes"] = rc.notes;
        j["critical_radii"] = std::move(s);
        if (!rc.holds) all_pass = false;
    }
    j["all_pass"] = all_pass;

    if (format_or(cfg, "json") == "csv") {
        std::string out = "suite,samples_kept,skipped,max_abs,scale,relative_max,pass\n";
        for (const auto& s : j["suites"]) {
            out += s["name"].get<std::string>() + "," + std::to_string(s["samples_kept"].get<size_t>()) +
                   "," + std::to_string(s["skipped"].get<int>()) + "," +
                   fmt17(s["max_abs"].get<double>()) + "," + fmt17(s["scale"].get<double>()) + "," +
                   fmt17(s["relative_max"].get<double>()) + "," + (s["pass"].get<bool>() ? "1" : "0") +
                   "\n";
        }
        write_output(cfg, out);
        return 0;
    }
    write_output(cfg, j.dump(2) + "\n");
    return 0;
}

int cmd_mesh(const RunConfig& cfg) {
    const CurveModel curve = load_curve(cfg);
    if (curve.dimension != 3)
        throw DimensionError("mesh sweeps polar lines, which needs a curve in R^3; got dimension " +
                             std::to_string(curve.dimension));
    const std::vector<FocalSample> rows = sampled(curve, cfg);
    const size_t n = rows.size();

    double rmax = 0.0;
    for (const FocalSample& r : rows)
        if (!r.flattening) rmax = std::max(rmax, r.focal.radii.back());
    if (rmax == 0.0)
        throw FlatteningPoint("every sample is a flattening; the focal set is at infinity");
    const double umax = 2.0 * rmax;

    std::string out = "# ruled surface swept by polar lines, with the focal curve as a polyline\n";
    std::vector<int> strip_index(n, 0);  // 1-based index of the first of the two strip vertices
    int next = 1;
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].flattening) continue;
        const VecD& g1 = rows[i].focal.partial_centers[0];
        const VecD& n2 = rows[i].frenet.frame[2];
        for (double sgn : {-1.0, 1.0}) {
            out += "v";
            for (size_t j = 0; j < 3; ++j) out += " " + fmt17(g1[j] + sgn * umax * n2[j]);
            out += "\n";
        }
        strip_index[i] = next;
        next += 2;
    }
    std::vector<int> focal_index(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].flattening) continue;
        out += "v";
        for (size_t j = 0; j < 3; ++j) out += " " + fmt17(rows[i].focal.center[j]);
        out += "\n";
        focal_index[i] = next++;
    }

    const size_t strips = curve.periodic ? n : n - 1;
    for (size_t i = 0; i < strips; ++i) {
        const size_t k = (i + 1) % n;
        if (!strip_index[i] || !strip_index[k]) continue;
        const int a = strip_index[i], b = strip_index[k];
        out += "f " + std::to_string(a) + " " + std::to_string(a + 1) + " " +
               std::to_string(b + 1) + " " + std::to_string(b) + "\n";
    }
    for (size_t i = 0; i < strips; ++i) {
        const size_t k = (i + 1) % n;
        if (!focal_index[i] || !focal_index[k]) continue;
        out += "l " + std::to_string(focal_index[i]) + " " + std::to_string(focal_index[k]) + "\n";
    }
    write_output(cfg, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frenet frames, focal curves, distinguished points and identity checks for curves in R^{m+1}"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        auto* in = sub->add_option("--input", cfg.input, "curve definition file");
        auto* bi = sub->add_option("--builtin", cfg.builtin_name,
                                   "builtin curve, optionally name:seed (see `builtins`)");
        in->excludes(bi);
        bi->excludes(in);
        sub->add_option("--samples", cfg.samples, "grid sample count")->check(CLI::Range(2, 10000000));
        sub->add_option("--order", cfg.order, "jet order override");
        sub->add_option("--output", cfg.output, "write to a file instead of stdout");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", cfg.tol, "relative tolerance for verify pass/fail");
    };

    CLI::App* c_frame = app.add_subcommand("frame", "per-sample Frenet frame and curvatures");
    CLI::App* c_focal = app.add_subcommand("focal", "per-sample focal center, focal curvatures, sphere radii");
    CLI::App* c_events = app.add_subcommand("events", "vertices, pseudo-vertices, flattenings, critical radii");
    CLI::App* c_verify = app.add_subcommand("verify", "residuals of the structural identities");
    CLI::App* c_mesh = app.add_subcommand("mesh", "OBJ mesh of the polar-line surface (R^3 only)");
    CLI::App* c_builtins = app.add_subcommand("builtins", "list builtin curve names");
    for (CLI::App* sub : {c_frame, c_focal, c_events, c_verify, c_mesh}) add_common(sub);
    c_builtins->add_option("--output", cfg.output, "write to a file instead of stdout");
    c_builtins->add_option("--format", cfg.format, "csv or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_frame)) return cmd_frame(cfg);
        if (app.got_subcommand(c_focal)) return cmd_focal(cfg);
        if (app.got_subcommand(c_events)) return cmd_events(cfg);
        if (app.got_subcommand(c_verify)) return cmd_verify(cfg);
        if (app.got_subcommand(c_mesh)) return cmd_mesh(cfg);
        if (app.got_subcommand(c_builtins)) return cmd_builtins(cfg);
    } catch (const focalis::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.category()) {
            case focalis::ErrorCategory::Parse: return 2;
            case focalis::ErrorCategory::Geometry: return 3;
            case focalis::ErrorCategory::Io: return 4;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
