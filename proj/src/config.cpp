#include "graspkde/config.hpp"

#include <fstream>
#include <string>

#include "graspkde/errors.hpp"
#include "json_util.hpp"

namespace graspkde {

void RunConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw DataError(std::string("config: ") + name + " must be positive");
    };
    if (k_nn < 4) throw DataError("config: k_nn must be at least 4");
    positive(sigma_p, "sigma_p");
    positive(sigma_q, "sigma_q");
    positive(sigma_r, "sigma_r");
    positive(lambda, "lambda");
    positive(delta, "delta");
    if (!(eta >= 0.0)) throw DataError("config: eta must be non-negative");
    if (!(zeta >= 0.0 && zeta < 1.0)) throw DataError("config: zeta must be in [0, 1)");
    positive(sigma_hc, "sigma_hc");
    if (k_query < 1) throw DataError("config: k_query must be at least 1");
    positive(sel_sigma_p, "sel_sigma_p");
    positive(sel_sigma_q, "sel_sigma_q");
    positive(sel_sigma_c, "sel_sigma_c");
    if (sa_steps < 1) throw DataError("config: sa_steps must be at least 1");
    positive(sa_t1, "sa_t1");
    positive(sa_tk, "sa_tk");
    if (!(sa_prop_p >= 0.0 && sa_prop_q >= 0.0 && sa_prop_c >= 0.0))
        throw DataError("config: proposal scales must be non-negative");
    if (population < 1) throw DataError("config: population must be at least 1");
    for (int s : selection_steps)
        if (s < 0 || s > sa_steps) throw DataError("config: selection steps must lie in [0, sa_steps]");
    if (!(retain > 0.0 && retain <= 1.0)) throw DataError("config: retain must be in (0, 1]");
    if (!(beta >= 0.0)) throw DataError("config: beta must be non-negative");
    positive(contact_threshold, "contact_threshold");
    positive(joint_rate, "joint_rate");
    if (workspace) {
        const auto& w = *workspace;
        if (!(w[0] < w[3] && w[1] < w[4] && w[2] < w[5]))
            throw DataError("config: workspace lo must be below hi on every axis");
    }
}

namespace detail {

json config_to_json(const RunConfig& c) {
    json j;
    j["k_nn"] = c.k_nn;
    j["max_model_particles"] = c.max_model_particles;
    j["sigma_p"] = c.sigma_p;
    j["sigma_q"] = c.sigma_q;
    j["sigma_r"] = c.sigma_r;
    j["lambda"] = c.lambda;
    j["delta"] = c.delta;
    j["eta"] = c.eta;
    j["zeta"] = c.zeta;
    j["sigma_hc"] = c.sigma_hc;
    j["k_query"] = c.k_query;
    j["sel_sigma_p"] = c.sel_sigma_p;
    j["sel_sigma_q"] = c.sel_sigma_q;
    j["sel_sigma_c"] = c.sel_sigma_c;
    j["sa_steps"] = c.sa_steps;
    j["sa_t1"] = c.sa_t1;
    j["sa_tk"] = c.sa_tk;
    j["sa_prop_p"] = c.sa_prop_p;
    j["sa_prop_q"] = c.sa_prop_q;
    j["sa_prop_c"] = c.sa_prop_c;
    j["population"] = c.population;
    j["selection_steps"] = c.selection_steps;
    j["retain"] = c.retain;
    j["beta"] = c.beta;
    j["contact_threshold"] = c.contact_threshold;
    j["joint_rate"] = c.joint_rate;
    j["seed"] = c.seed;
    if (c.workspace)
        j["workspace"] = *c.workspace;
    else
        j["workspace"] = nullptr;
    j["parallel"] = c.parallel;
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "k_nn") c.k_nn = value.get<int>();
            else if (key == "max_model_particles") c.max_model_particles = value.get<std::size_t>();
            else if (key == "sigma_p") c.sigma_p = value.get<double>();
            else if (key == "sigma_q") c.sigma_q = value.get<double>();
            else if (key == "sigma_r") c.sigma_r = value.get<double>();
            else if (key == "lambda") c.lambda = value.get<double>();
            else if (key == "delta") c.delta = value.get<double>();
            else if (key == "eta") c.eta = value.get<double>();
            else if (key == "zeta") c.zeta = value.get<double>();
            else if (key == "sigma_hc") c.sigma_hc = value.get<double>();
            else if (key == "k_query") c.k_query = value.get<int>();
            else if (key == "sel_sigma_p") c.sel_sigma_p = value.get<double>();
            else if (key == "sel_sigma_q") c.sel_sigma_q = value.get<double>();
            else if (key == "sel_sigma_c") c.sel_sigma_c = value.get<double>();
            else if (key == "sa_steps") c.sa_steps = value.get<int>();
            else if (key == "sa_t1") c.sa_t1 = value.get<double>();
            else if (key == "sa_tk") c.sa_tk = value.get<double>();
            else if (key == "sa_prop_p") c.sa_prop_p = value.get<double>();
            else if (key == "sa_prop_q") c.sa_prop_q = value.get<double>();
            else if (key == "sa_prop_c") c.sa_prop_c = value.get<double>();
            else if (key == "population") c.population = value.get<int>();
            else if (key == "selection_steps") c.selection_steps = value.get<std::vector<int>>();
            else if (key == "retain") c.retain = value.get<double>();
            else if (key == "beta") c.beta = value.get<double>();
            else if (key == "contact_threshold") c.contact_threshold = value.get<double>();
            else if (key == "joint_rate") c.joint_rate = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "workspace") {
                if (value.is_null()) c.workspace.reset();
                else c.workspace = value.get<std::array<double, 6>>();
            }
            else if (key == "parallel") c.parallel = value.get<bool>();
            else throw DataError("config: unknown key '" + key + "'");
        } catch (const json::exception& e) {
            throw DataError("config: bad value for '" + key + "': " + e.what());
        }
    }
    c.validate();
    return c;
}

}  // namespace detail

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_config: cannot open " + path.string());
    detail::json j;
    try {
        in >> j;
    } catch (const detail::json::parse_error& e) {
        throw DataError("load_config: " + path.string() + ": " + e.what());
    }
    return detail::config_from_json(j);
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("save_config: cannot open " + path.string() + " for writing");
    out << detail::config_to_json(cfg).dump(2) << '\n';
}

}  // namespace graspkde
