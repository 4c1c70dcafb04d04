#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "psfront/config.hpp"
#include "psfront/errors.hpp"
#include "psfront/pipeline.hpp"

namespace {

using nlohmann::json;

struct CliOverrides {
    std::string config_path;
    std::string kappa, tau, alpha, beta, A, B;
    std::string domain;
    std::string run_path;
    int res = 0;
    int truncation = 0;
    double lambda0 = 0.0;
    int epsilon = 0;
    std::string out_dir;
    std::string formats;
};

// --domain uv:-1:1:101,-1:1:101  or  xy:-1:1:101,-1:1:101
json parse_domain(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw psfront::ConfigError("bad --domain syntax");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw psfront::ConfigError("bad --domain syntax");
    auto parse_axis = [](const std::string& axis) {
        double lo, hi;
        int n;
        if (std::sscanf(axis.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3) {
            throw psfront::ConfigError("bad --domain axis: " + axis);
        }
        return std::tuple<double, double, int>{lo, hi, n};
    };
    const auto [ulo, uhi, un] = parse_axis(rest.substr(0, comma));
    const auto [vlo, vhi, vn] = parse_axis(rest.substr(comma + 1));
    json d;
    d["kind"] = kind;
    if (kind == "uv") {
        d["u"] = {ulo, uhi};
        d["v"] = {vlo, vhi};
        d["nu"] = un;
        d["nv"] = vn;
    } else {
        d["x"] = {ulo, uhi};
        d["y"] = {vlo, vhi};
        d["nx"] = un;
        d["ny"] = vn;
    }
    return d;
}

json build_config(const std::string& mode, const CliOverrides& o) {
    json j;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw psfront::ConfigError("cannot open config: " + o.config_path);
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw psfront::ConfigError(std::string("config JSON parse error: ") + e.what());
        }
    }
    j["mode"] = mode;
    if (!o.run_path.empty()) j["run"] = o.run_path;
    if (!o.kappa.empty() || !o.tau.empty()) {
        if (mode == "characteristic") {
            if (!o.kappa.empty()) j["characteristic"]["kappa"] = o.kappa;
        } else {
            if (!o.kappa.empty()) j["curve"]["kappa"] = o.kappa;
            if (!o.tau.empty()) j["curve"]["tau"] = o.tau;
        }
    }
    if (!o.alpha.empty()) j["characteristic"]["alpha"] = o.alpha;
    if (!o.beta.empty()) {
        if (mode == "characteristic") {
            j["characteristic"]["beta"] = o.beta;
        } else {
            j["generate"]["beta"] = o.beta;
        }
    }
    if (!o.A.empty()) j["generate"]["A"] = o.A;
    if (!o.B.empty()) j["generate"]["B"] = o.B;
    if (o.epsilon != 0) {
        if (mode == "generate") {
            j["generate"]["epsilon"] = o.epsilon;
        } else if (mode == "cauchy" || mode == "verify") {
            j["curve"]["epsilon"] = o.epsilon;
        }
    }
    if (!o.domain.empty()) j["domain"] = parse_domain(o.domain);
    if (o.res > 0) {
        if (!j.contains("domain")) j["domain"] = {{"kind", mode == "characteristic" ? "xy" : "uv"}};
        if (j["domain"]["kind"] == "uv") {
            j["domain"]["nu"] = o.res;
            j["domain"]["nv"] = o.res;
        } else {
            j["domain"]["nx"] = o.res;
            j["domain"]["ny"] = o.res;
        }
    }
    if (o.truncation > 0) j["truncation"] = o.truncation;
    if (o.lambda0 != 0.0) j["lambda0"] = o.lambda0;
    if (!o.out_dir.empty()) j["output"]["dir"] = o.out_dir;
    if (!o.formats.empty()) {
        json fmts = json::array();
        std::string token;
        std::istringstream is(o.formats);
        while (std::getline(is, token, ',')) fmts.push_back(token);
        j["output"]["formats"] = fmts;
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "psfront: pseudospherical frontals via the loop-group d'Alembert method.\n"
        "Builds constant Gauss curvature -1 surfaces with prescribed singular\n"
        "curves, detects and classifies the singular set, and exports meshes."};
    app.require_subcommand(1);

    CliOverrides o;
    std::string mode;
    for (const auto& [name, help] :
         std::vector<std::pair<std::string, std::string>>{
             {"generate", "surface from boundary data A(t), B(t), beta(t) along y = eps x"},
             {"cauchy", "surface containing a curve with given kappa, tau as a cuspidal edge"},
             {"characteristic", "surface with the singular curve on the characteristic y = 0"},
             {"classify", "re-run singular detection/classification on a stored run"},
             {"verify", "run the quantitative check suite and emit a report"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&mode, name = name] { mode = name; });
        sub->add_option("--config", o.config_path, "JSON job configuration");
        sub->add_option("--run", o.run_path, "stored run.json (classify)");
        sub->add_option("--kappa", o.kappa, "curvature expression");
        sub->add_option("--tau", o.tau, "torsion expression");
        sub->add_option("--alpha", o.alpha, "characteristic alpha(y)");
        sub->add_option("--beta", o.beta, "beta expression");
        sub->add_option("--A", o.A, "boundary |f_x| expression");
        sub->add_option("--B", o.B, "boundary |f_y| expression");
        sub->add_option("--domain", o.domain, "uv:lo:hi:n,lo:hi:n or xy:lo:hi:n,lo:hi:n");
        sub->add_option("--res", o.res, "square resolution shortcut");
        sub->add_option("--truncation", o.truncation, "loop truncation order N");
        sub->add_option("--lambda0", o.lambda0, "Sym-formula spectral parameter");
        sub->add_option("--epsilon", o.epsilon, "singular-curve slope sign (+1/-1)");
        sub->add_option("--out", o.out_dir, "output directory");
        sub->add_option("--format", o.formats, "comma list of obj,ply,csv,json");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const psfront::JobConfig cfg = psfront::load_config(build_config(mode, o));
        const auto written = psfront::run_job(cfg);
        for (const auto& path : written) std::cout << "wrote " << path << '\n';
        return 0;
    } catch (const psfront::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case psfront::ErrorKind::Config: return 2;
            case psfront::ErrorKind::Numerical: return 3;
            case psfront::ErrorKind::Precondition: return 4;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
