#include "psfront/config.hpp"

#include <fstream>
#include <set>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

void check_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
}

void check_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + " must be a string");
}

void validate_interval(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(where + " must be [lo, hi]");
    }
    if (!(j[0].get<double>() < j[1].get<double>())) {
        throw ConfigError(where + " must satisfy lo < hi");
    }
}

void validate_domain(json& domain) {
    if (!domain.contains("kind")) throw ConfigError("domain.kind is required");
    check_string(domain["kind"], "domain.kind");
    const std::string kind = domain["kind"].get<std::string>();
    if (kind == "uv") {
        require_keys(domain, "domain", {"kind", "u", "v", "nu", "nv"});
        if (!domain.contains("u")) domain["u"] = {-1.0, 1.0};
        if (!domain.contains("v")) domain["v"] = {-1.0, 1.0};
        if (!domain.contains("nu")) domain["nu"] = 101;
        if (!domain.contains("nv")) domain["nv"] = 101;
        validate_interval(domain["u"], "domain.u");
        validate_interval(domain["v"], "domain.v");
        for (const char* key : {"nu", "nv"}) {
            if (!domain[key].is_number_integer() || domain[key].get<int>() < 2) {
                throw ConfigError(std::string("domain.") + key + " must be an integer >= 2");
            }
        }
        const double hu = (domain["u"][1].get<double>() - domain["u"][0].get<double>()) /
                          (domain["nu"].get<int>() - 1);
        const double hv = (domain["v"][1].get<double>() - domain["v"][0].get<double>()) /
                          (domain["nv"].get<int>() - 1);
        if (std::abs(hu - hv) > 1e-9 * std::max(hu, hv)) {
            throw ConfigError("uv domains need equal u and v spacing (shared null axes)");
        }
    } else if (kind == "xy") {
        require_keys(domain, "domain", {"kind", "x", "y", "nx", "ny"});
        if (!domain.contains("x")) domain["x"] = {-1.0, 1.0};
        if (!domain.contains("y")) domain["y"] = {-1.0, 1.0};
        if (!domain.contains("nx")) domain["nx"] = 101;
        if (!domain.contains("ny")) domain["ny"] = 101;
        validate_interval(domain["x"], "domain.x");
        validate_interval(domain["y"], "domain.y");
        for (const char* key : {"nx", "ny"}) {
            if (!domain[key].is_number_integer() || domain[key].get<int>() < 2) {
                throw ConfigError(std::string("domain.") + key + " must be an integer >= 2");
            }
        }
    } else {
        throw ConfigError("domain.kind must be \"uv\" or \"xy\"");
    }
}

void validate_curve(const json& curve) {
    require_keys(curve, "curve",
                 {"kappa", "tau", "name", "params", "x", "y", "z", "t0", "t1", "csv", "samples",
                  "epsilon"});
    const bool has_data = curve.contains("kappa") && curve.contains("tau");
    const bool has_name = curve.contains("name");
    const bool has_exprs = curve.contains("x") || curve.contains("y") || curve.contains("z");
    const bool has_csv = curve.contains("csv");
    const int sources = int(has_data) + int(has_name) + int(has_exprs) + int(has_csv);
    if (sources != 1) {
        throw ConfigError(
            "curve needs exactly one source: kappa/tau expressions, a name, x/y/z expressions, "
            "or a csv path");
    }
    if (has_exprs) {
        for (const char* key : {"x", "y", "z", "t0", "t1"}) {
            if (!curve.contains(key)) {
                throw ConfigError(std::string("curve.") + key +
                                  " is required with expression curves");
            }
        }
    }
    if (curve.contains("epsilon")) {
        const int e = curve["epsilon"].get<int>();
        if (e != 1 && e != -1) throw ConfigError("curve.epsilon must be +1 or -1");
    }
}

void validate_potential_leg(const json& leg, const std::string& where) {
    if (!leg.is_array()) throw ConfigError(where + " must be an array of terms");
    for (const auto& term : leg) {
        require_keys(term, where + " term", {"power", "e1", "e2", "e3"});
        if (!term.contains("power") || !term["power"].is_number_integer()) {
            throw ConfigError(where + " term needs an integer power");
        }
    }
}

json default_tolerances() {
    return json{{"tail_budget", 1e-6},   {"rcond_min", 1e-12},    {"weak", 1e-6},
                {"degeneracy", 1e-4},    {"mu_degeneracy", 1e-4}, {"zero_scale", 1e-6},
                {"refine", 1e-8},        {"node_zero", 1e-10},    {"flag_radius", -1.0},
                {"unitary", 1e-8},       {"det", 1e-10}};
}

}  // namespace

JobConfig load_config(const json& input) {
    json j = input;
    require_keys(j, "config",
                 {"mode", "run", "curve", "generate", "characteristic", "potential", "domain",
                  "truncation", "lambda0", "lambdas", "params", "tolerances", "integration",
                  "output"});
    if (!j.contains("mode")) throw ConfigError("mode is required");
    check_string(j["mode"], "mode");
    const std::string mode = j["mode"].get<std::string>();
    const std::set<std::string> modes{"generate", "cauchy", "characteristic", "classify",
                                      "verify"};
    if (!modes.count(mode)) {
        throw ConfigError("mode must be one of generate|cauchy|characteristic|classify|verify");
    }

    if (mode == "classify") {
        if (!j.contains("run")) throw ConfigError("classify mode needs \"run\": path to run.json");
        check_string(j["run"], "run");
    } else if (mode == "cauchy") {
        if (!j.contains("curve")) throw ConfigError("cauchy mode needs a \"curve\" block");
    } else if (mode == "characteristic") {
        if (!j.contains("characteristic")) {
            throw ConfigError("characteristic mode needs a \"characteristic\" block");
        }
    } else if (mode == "generate") {
        if (!j.contains("generate") && !j.contains("potential")) {
            throw ConfigError("generate mode needs a \"generate\" or \"potential\" block");
        }
    } else if (mode == "verify") {
        if (!j.contains("curve") && !j.contains("generate") && !j.contains("characteristic") &&
            !j.contains("potential")) {
            throw ConfigError("verify mode needs a surface source block");
        }
    }

    if (j.contains("curve")) validate_curve(j["curve"]);
    if (j.contains("generate")) {
        require_keys(j["generate"], "generate", {"A", "B", "beta", "epsilon"});
        for (const char* key : {"A", "B", "beta"}) {
            if (!j["generate"].contains(key)) {
                throw ConfigError(std::string("generate.") + key + " is required");
            }
            check_string(j["generate"][key], std::string("generate.") + key);
        }
        if (!j["generate"].contains("epsilon")) j["generate"]["epsilon"] = 1;
        const int e = j["generate"]["epsilon"].get<int>();
        if (e != 1 && e != -1) throw ConfigError("generate.epsilon must be +1 or -1");
    }
    if (j.contains("characteristic")) {
        require_keys(j["characteristic"], "characteristic", {"kappa", "alpha", "beta"});
        for (const char* key : {"kappa", "alpha", "beta"}) {
            if (!j["characteristic"].contains(key)) {
                throw ConfigError(std::string("characteristic.") + key + " is required");
            }
            check_string(j["characteristic"][key], std::string("characteristic.") + key);
        }
    }
    if (j.contains("potential")) {
        require_keys(j["potential"], "potential", {"chi", "psi", "epsilon"});
        if (!j["potential"].contains("chi") || !j["potential"].contains("psi")) {
            throw ConfigError("potential needs chi and psi term arrays");
        }
        validate_potential_leg(j["potential"]["chi"], "potential.chi");
        validate_potential_leg(j["potential"]["psi"], "potential.psi");
        if (!j["potential"].contains("epsilon")) j["potential"]["epsilon"] = 1;
    }

    if (mode != "classify") {
        if (!j.contains("domain")) {
            j["domain"] = {{"kind", mode == "characteristic" ? "xy" : "uv"}};
        }
        validate_domain(j["domain"]);
    }

    if (!j.contains("truncation")) j["truncation"] = 12;
    if (!j["truncation"].is_number_integer() || j["truncation"].get<int>() < 2 ||
        j["truncation"].get<int>() > 256) {
        throw ConfigError("truncation must be an integer in [2, 256]");
    }
    if (!j.contains("lambda0")) j["lambda0"] = 1.0;
    check_number(j["lambda0"], "lambda0");
    if (j["lambda0"].get<double>() == 0.0) throw ConfigError("lambda0 must be nonzero");
    if (!j.contains("lambdas")) j["lambdas"] = json::array();
    if (!j["lambdas"].is_array()) throw ConfigError("lambdas must be an array of numbers");
    for (const auto& l : j["lambdas"]) {
        check_number(l, "lambdas entry");
        if (!(l.get<double>() > 0)) throw ConfigError("lambdas entries must be positive");
    }
    if (!j.contains("params")) j["params"] = json::object();
    if (!j["params"].is_object()) throw ConfigError("params must be an object of numbers");
    for (const auto& [key, value] : j["params"].items()) {
        if (!value.is_number()) throw ConfigError("params." + key + " must be a number");
    }

    json tol = default_tolerances();
    if (j.contains("tolerances")) {
        std::set<std::string> allowed;
        for (const auto& [key, value] : tol.items()) {
            (void)value;
            allowed.insert(key);
        }
        require_keys(j["tolerances"], "tolerances", allowed);
        for (const auto& [key, value] : j["tolerances"].items()) {
            check_number(value, "tolerances." + key);
            tol[key] = value;
        }
    }
    j["tolerances"] = tol;

    if (!j.contains("integration")) j["integration"] = json::object();
    require_keys(j["integration"], "integration", {"renormalize"});
    if (!j["integration"].contains("renormalize")) j["integration"]["renormalize"] = false;
    if (!j["integration"]["renormalize"].is_boolean()) {
        throw ConfigError("integration.renormalize must be a boolean");
    }

    if (!j.contains("output")) j["output"] = json::object();
    require_keys(j["output"], "output", {"dir", "basename", "formats"});
    if (!j["output"].contains("dir")) j["output"]["dir"] = "out";
    if (!j["output"].contains("basename")) j["output"]["basename"] = "surface";
    if (!j["output"].contains("formats")) j["output"]["formats"] = {"obj", "csv", "json"};
    check_string(j["output"]["dir"], "output.dir");
    check_string(j["output"]["basename"], "output.basename");
    if (!j["output"]["formats"].is_array()) throw ConfigError("output.formats must be an array");
    for (const auto& f : j["output"]["formats"]) {
        check_string(f, "output.formats entry");
        const std::string fmt = f.get<std::string>();
        if (fmt != "obj" && fmt != "ply" && fmt != "csv" && fmt != "json") {
            throw ConfigError("output format must be obj|ply|csv|json");
        }
    }

    JobConfig cfg;
    cfg.mode = mode;
    cfg.doc = std::move(j);
    return cfg;
}

JobConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config JSON parse error in " + path + ": " + e.what());
    }
    return load_config(j);
}

}  // namespace psfront
