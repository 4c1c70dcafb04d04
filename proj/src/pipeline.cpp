#include "psfront/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "psfront/curves.hpp"
#include "psfront/errors.hpp"

namespace psfront {

namespace {

using nlohmann::json;

std::map<std::string, double> param_map(const json& params) {
    std::map<std::string, double> out;
    for (const auto& [key, value] : params.items()) out[key] = value.get<double>();
    return out;
}

Interval json_interval(const json& j) { return Interval{j[0].get<double>(), j[1].get<double>()}; }

ScalarFunction parse_component(const json& term, const char* key, const std::string& var,
                               const std::map<std::string, double>& params) {
    if (!term.contains(key)) return ScalarFunction();
    return parse_scalar(term[key].get<std::string>(), var, params);
}

PotentialLeg leg_from_json(const json& terms, const std::string& var,
                           const std::map<std::string, double>& params) {
    PotentialLeg leg;
    for (const auto& term : terms) {
        Su2Coefficient c;
        c.c1 = parse_component(term, "e1", var, params);
        c.c2 = parse_component(term, "e2", var, params);
        c.c3 = parse_component(term, "e3", var, params);
        leg.add_term(term["power"].get<int>(), std::move(c));
    }
    return leg;
}

CurveData build_curve_data(const json& curve, const std::map<std::string, double>& params) {
    CurveOptions copts;
    if (curve.contains("samples")) copts.samples = curve["samples"].get<int>();
    if (curve.contains("name")) {
        std::map<std::string, double> cparams = params;
        if (curve.contains("params")) {
            for (const auto& [key, value] : curve["params"].items()) {
                cparams[key] = value.get<double>();
            }
        }
        return named_curve(curve["name"].get<std::string>(), cparams, copts);
    }
    if (curve.contains("csv")) {
        const std::string path = curve["csv"].get<std::string>();
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open curve csv: " + path);
        std::vector<double> ts;
        std::vector<Vec3> pts;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
            double vals[4];
            std::size_t pos = 0;
            for (int col = 0; col < 4; ++col) {
                const std::size_t next = line.find(',', pos);
                vals[col] = std::strtod(line.substr(pos, next - pos).c_str(), nullptr);
                if (next == std::string::npos && col < 3) {
                    throw ConfigError("curve csv rows need t,x,y,z");
                }
                pos = next + 1;
            }
            ts.push_back(vals[0]);
            pts.emplace_back(vals[1], vals[2], vals[3]);
        }
        return curve_from_samples(ts, pts, copts);
    }
    const auto fx = parse_scalar(curve["x"].get<std::string>(), "t", params);
    const auto fy = parse_scalar(curve["y"].get<std::string>(), "t", params);
    const auto fz = parse_scalar(curve["z"].get<std::string>(), "t", params);
    return curve_from_expressions(fx, fy, fz, curve["t0"].get<double>(),
                                  curve["t1"].get<double>(), copts);
}

// A curve job whose uv box was left at the [-1,1]^2 default gets the curve's
// full arclength span in u and a quarter-span strip in v (spacing matched).
void default_curve_domain(json& domain, double s0, double s1) {
    if (domain["kind"].get<std::string>() != "uv") return;
    if (domain["u"][0].get<double>() == -1.0 && domain["u"][1].get<double>() == 1.0 &&
        (s1 - s0) > 0 && (s0 != -1.0 || s1 != 1.0)) {
        domain["u"] = {s0, s1};
        const int nu = domain["nu"].get<int>();
        const double h = (s1 - s0) / (nu - 1);
        const int half = std::max(1, static_cast<int>(std::floor(0.25 * (s1 - s0) / h)));
        domain["nv"] = 2 * half + 1;
        domain["v"] = {-half * h, half * h};
    }
}

struct DomainAxes {
    AxisGrid x, y;
    std::optional<UvEmbedding> uv;
};

DomainAxes make_axes(const json& domain, int epsilon) {
    DomainAxes axes;
    if (domain["kind"].get<std::string>() == "uv") {
        const Interval ui = json_interval(domain["u"]);
        const Interval vi = json_interval(domain["v"]);
        const int nu = domain["nu"].get<int>();
        const int nv = domain["nv"].get<int>();
        const AxisGrid U = AxisGrid::from_interval(ui.lo, ui.hi, nu);
        const AxisGrid V = AxisGrid::from_interval(vi.lo, vi.hi, nv);
        AxisGrid X;
        X.h = U.h;
        X.count = nu + nv - 1;
        X.basepoint = U.basepoint + V.basepoint;
        X.origin = U.origin + V.origin;
        AxisGrid Y;
        Y.h = U.h;
        Y.count = nu + nv - 1;
        if (epsilon == 1) {
            Y.basepoint = U.basepoint - V.basepoint + (nv - 1);
            Y.origin = U.origin - V.origin;
        } else {
            Y.basepoint = V.basepoint - U.basepoint + (nu - 1);
            Y.origin = V.origin - U.origin;
        }
        axes.x = X;
        axes.y = Y;
        axes.uv = UvEmbedding{nu, nv, epsilon};
    } else {
        const Interval xi = json_interval(domain["x"]);
        const Interval yi = json_interval(domain["y"]);
        axes.x = AxisGrid::from_interval(xi.lo, xi.hi, domain["nx"].get<int>());
        axes.y = AxisGrid::from_interval(yi.lo, yi.hi, domain["ny"].get<int>());
    }
    return axes;
}

json report_json(const CheckReport& report) {
    json out;
    for (const auto& [name, m] : report.metrics) {
        out[name] = {{"max", m.max},       {"rms", m.rms},   {"threshold", m.threshold},
                     {"pass", m.pass},     {"count", m.count}, {"skipped", m.skipped}};
    }
    json fails = json::array();
    for (const auto& [x, y] : report.weak_regularity_failures) fails.push_back({x, y});
    out["weak_regularity_failures"] = std::move(fails);
    return out;
}

}  // namespace

RunResult run_pipeline(const JobConfig& cfg) {
    const json& j = cfg.doc;
    const auto params = param_map(j["params"]);
    json resolved = j;

    std::shared_ptr<const PotentialPair> pair;
    int epsilon = +1;

    const bool characteristic_source = j.contains("characteristic");
    if (j.contains("curve")) {
        const json& curve = j["curve"];
        CauchyData data;
        if (curve.contains("kappa")) {
            data.kappa = parse_scalar(curve["kappa"].get<std::string>(), "t", params);
            data.tau = parse_scalar(curve["tau"].get<std::string>(), "t", params);
            data.J = json_interval(resolved["domain"]["u"]);
        } else {
            const CurveData cd = build_curve_data(curve, params);
            data.kappa = cd.kappa_function();
            data.tau = cd.tau_function();
            data.J = Interval{cd.s0(), cd.s1()};
            default_curve_domain(resolved["domain"], cd.s0(), cd.s1());
        }
        if (curve.contains("epsilon")) data.epsilon_override = curve["epsilon"].get<int>();
        pair = std::make_shared<PotentialPair>(cuspidal_edge_potential(data));
        epsilon = pair->epsilon;
    } else if (characteristic_source) {
        const json& ch = j["characteristic"];
        const auto kappa = parse_scalar(ch["kappa"].get<std::string>(), "x", params);
        const auto alpha = parse_scalar(ch["alpha"].get<std::string>(), "y", params);
        const auto beta = parse_scalar(ch["beta"].get<std::string>(), "y", params);
        if (resolved["domain"]["kind"].get<std::string>() != "xy") {
            throw ConfigError("characteristic mode works on an xy domain");
        }
        pair = std::make_shared<PotentialPair>(
            characteristic_potential(kappa, alpha, beta, json_interval(resolved["domain"]["x"]),
                                     json_interval(resolved["domain"]["y"])));
    } else if (j.contains("generate")) {
        const json& g = j["generate"];
        const auto A = parse_scalar(g["A"].get<std::string>(), "t", params);
        const auto B = parse_scalar(g["B"].get<std::string>(), "t", params);
        const auto beta = parse_scalar(g["beta"].get<std::string>(), "t", params);
        epsilon = g["epsilon"].get<int>();
        const Interval ju = json_interval(resolved["domain"]["kind"] == "uv"
                                              ? resolved["domain"]["u"]
                                              : resolved["domain"]["x"]);
        pair = std::make_shared<PotentialPair>(noncharacteristic_potential(A, B, beta, epsilon, ju));
    } else if (j.contains("potential")) {
        const json& p = j["potential"];
        epsilon = p["epsilon"].get<int>();
        pair = std::make_shared<PotentialPair>(raw_potential_pair(
            leg_from_json(p["chi"], "x", params), leg_from_json(p["psi"], "y", params), epsilon));
    } else {
        throw ConfigError("no surface source in config");
    }

    const DomainAxes axes = make_axes(resolved["domain"], pair->epsilon);

    FrameGridOptions fopts;
    fopts.truncation = j["truncation"].get<int>();
    fopts.integration.tail_budget = j["tolerances"]["tail_budget"].get<double>();
    fopts.integration.renormalize = j["integration"]["renormalize"].get<bool>();
    fopts.rcond_min = j["tolerances"]["rcond_min"].get<double>();
    const double lambda0 = j["lambda0"].get<double>();
    fopts.lambdas = {0.5, 1.0, 2.0};
    for (const auto& l : j["lambdas"]) fopts.lambdas.push_back(l.get<double>());
    fopts.lambdas.push_back(std::abs(lambda0));
    std::sort(fopts.lambdas.begin(), fopts.lambdas.end());
    fopts.lambdas.erase(std::unique(fopts.lambdas.begin(), fopts.lambdas.end(),
                                    [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                        fopts.lambdas.end());

    RunResult result;
    result.pair = pair;
    result.frames = std::make_shared<FrameGrid>(build_frame_grid(pair, axes.x, axes.y, fopts));
    result.surface = sym_surface(*result.frames, lambda0);

    SingularOptions sopts;
    const json& tol = j["tolerances"];
    sopts.refine_tol = tol["refine"].get<double>();
    sopts.node_zero_tol = tol["node_zero"].get<double>();
    sopts.weak_tol = tol["weak"].get<double>();
    sopts.degeneracy_tol = tol["degeneracy"].get<double>();
    sopts.mu_degeneracy_tol = tol["mu_degeneracy"].get<double>();
    sopts.zero_tol_scale = tol["zero_scale"].get<double>();
    sopts.flag_radius = tol["flag_radius"].get<double>();
    result.singular = detect_singular_set(result.surface, *result.frames, sopts);

    if (cfg.mode == "verify") result.report = check_suite(result.surface);

    result.uv = axes.uv;
    result.mesh = axes.uv ? uv_sublattice_mesh(result.surface, *axes.uv)
                          : full_grid_mesh(result.surface);
    result.resolved = std::move(resolved);
    return result;
}

std::vector<std::string> run_job(const JobConfig& cfg) {
    JobConfig effective = cfg;
    if (cfg.mode == "classify") {
        const std::string run_path = cfg.doc["run"].get<std::string>();
        JobConfig stored = load_config_file(run_path);
        json merged = stored.doc;
        if (cfg.doc.contains("tolerances")) {
            for (const auto& [key, value] : cfg.doc["tolerances"].items()) {
                merged["tolerances"][key] = value;
            }
        }
        if (cfg.doc.contains("output")) merged["output"] = cfg.doc["output"];
        effective = load_config(merged);
    }

    const RunResult result = run_pipeline(effective);

    const std::string dir = cfg.doc.contains("output") && cfg.doc["output"].contains("dir")
                                ? cfg.doc["output"]["dir"].get<std::string>()
                                : effective.doc["output"]["dir"].get<std::string>();
    const std::string base = effective.doc["output"]["basename"].get<std::string>();
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;

    auto path_of = [&](const std::string& suffix) { return dir + "/" + base + suffix; };

    if (cfg.mode == "classify") {
        write_singular_json(result.singular, path_of("_singular.json"));
        written.push_back(path_of("_singular.json"));
    } else {
        for (const auto& fmt : effective.doc["output"]["formats"]) {
            const std::string f = fmt.get<std::string>();
            if (f == "obj") {
                write_obj(result.surface, result.mesh, path_of(".obj"));
                written.push_back(path_of(".obj"));
            } else if (f == "ply") {
                write_ply(result.surface, result.mesh, path_of(".ply"));
                written.push_back(path_of(".ply"));
            } else if (f == "csv") {
                write_csv(result.surface, path_of(".csv"));
                written.push_back(path_of(".csv"));
            } else if (f == "json") {
                write_singular_json(result.singular, path_of("_singular.json"));
                written.push_back(path_of("_singular.json"));
            }
        }
        if (result.report) {
            std::ofstream out(path_of("_report.json"));
            if (!out) throw ConfigError("cannot open for writing: " + path_of("_report.json"));
            out << report_json(*result.report).dump(2) << '\n';
            written.push_back(path_of("_report.json"));
        }
    }

    {
        json run_doc = result.resolved;
        std::ofstream out(dir + "/run.json");
        if (!out) throw ConfigError("cannot open for writing: " + dir + "/run.json");
        out << run_doc.dump(2) << '\n';
        written.push_back(dir + "/run.json");
    }
    return written;
}

}  // namespace psfront
