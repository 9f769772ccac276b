#include "renorm/config.hpp"

#include <fstream>
#include <sstream>

namespace renorm {

namespace {

const std::set<std::string> kStages = {"atlas", "polyhedral", "smooth", "lur", "verify"};

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("wrong type for '") + key + "'");
    }
}

Mat read_matrix(const json& j, int d, const std::string& name)
{
    if (!j.is_array() || int(j.size()) != d) throw ConfigError(name + " must be a d x d array");
    Mat m(d, d);
    for (int r = 0; r < d; ++r) {
        if (!j[r].is_array() || int(j[r].size()) != d) throw ConfigError(name + " must be a d x d array");
        for (int c = 0; c < d; ++c) {
            if (!j[r][c].is_number()) throw ConfigError(name + " entries must be numbers");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

json matrix_json(const Mat& m)
{
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

// A number fills the whole table; a nested array gives it explicitly.
std::vector<std::vector<double>> read_table(const json& j, int K, const std::string& name)
{
    if (j.is_number()) return std::vector<std::vector<double>>(K, std::vector<double>(K, j.get<double>()));
    if (!j.is_array() || int(j.size()) != K) throw ConfigError(name + " must be a number or a K x K array");
    std::vector<std::vector<double>> t(K);
    for (int n = 0; n < K; ++n) {
        if (!j[n].is_array() || int(j[n].size()) != K) throw ConfigError(name + " must be a K x K array");
        for (int m = 0; m < K; ++m) {
            if (!j[n][m].is_number()) throw ConfigError(name + " entries must be numbers");
            t[n].push_back(j[n][m].get<double>());
        }
    }
    return t;
}

json smooth_checks_json(const SmoothChecks& c)
{
    return {{"sandwich_samples", c.sandwich_samples}, {"gradient_samples", c.gradient_samples},
            {"locality_centers", c.locality_centers}, {"locality_neighbors", c.locality_neighbors},
            {"lfc_points", c.lfc_points},             {"lfc_perturbations", c.lfc_perturbations},
            {"gradient_tol", c.gradient_tol},         {"locality_tol", c.locality_tol},
            {"lfc_tol", c.lfc_tol}};
}

json lur_checks_json(const LurChecks& c)
{
    return {{"sandwich_samples", c.sandwich_samples}, {"lipschitz_pairs", c.lipschitz_pairs},
            {"z_samples", c.z_samples},               {"norm_samples", c.norm_samples},
            {"probe_points", c.probe_points},         {"probe_samples", c.probe_samples},
            {"modulus_points", c.modulus_points},     {"lipschitz_slack", c.lipschitz_slack},
            {"tail_tol", c.tail_tol},                 {"homogeneity_tol", c.homogeneity_tol}};
}

void read_checks(const json& j, CheckSizes& c)
{
    only_keys(j,
              {"construction_samples", "compatibility_samples", "polyhedral_samples", "polyhedral_sandwich",
               "lfc_points", "lfc_neighbors", "equivalence_samples", "modulus_pairs", "diameter_samples", "smooth",
               "lur"},
              "checks");
    read(j, "construction_samples", c.construction_samples);
    read(j, "compatibility_samples", c.compatibility_samples);
    read(j, "polyhedral_samples", c.polyhedral_samples);
    read(j, "polyhedral_sandwich", c.polyhedral_sandwich);
    read(j, "lfc_points", c.lfc_points);
    read(j, "lfc_neighbors", c.lfc_neighbors);
    read(j, "equivalence_samples", c.equivalence_samples);
    read(j, "modulus_pairs", c.modulus_pairs);
    read(j, "diameter_samples", c.diameter_samples);
    if (j.contains("smooth")) {
        const json& s = j["smooth"];
        only_keys(s,
                  {"sandwich_samples", "gradient_samples", "locality_centers", "locality_neighbors", "lfc_points",
                   "lfc_perturbations", "gradient_tol", "locality_tol", "lfc_tol"},
                  "checks.smooth");
        read(s, "sandwich_samples", c.smooth.sandwich_samples);
        read(s, "gradient_samples", c.smooth.gradient_samples);
        read(s, "locality_centers", c.smooth.locality_centers);
        read(s, "locality_neighbors", c.smooth.locality_neighbors);
        read(s, "lfc_points", c.smooth.lfc_points);
        read(s, "lfc_perturbations", c.smooth.lfc_perturbations);
        read(s, "gradient_tol", c.smooth.gradient_tol);
        read(s, "locality_tol", c.smooth.locality_tol);
        read(s, "lfc_tol", c.smooth.lfc_tol);
    }
    if (j.contains("lur")) {
        const json& s = j["lur"];
        only_keys(s,
                  {"sandwich_samples", "lipschitz_pairs", "z_samples", "norm_samples", "probe_points",
                   "probe_samples", "modulus_points", "lipschitz_slack", "tail_tol", "homogeneity_tol"},
                  "checks.lur");
        read(s, "sandwich_samples", c.lur.sandwich_samples);
        read(s, "lipschitz_pairs", c.lur.lipschitz_pairs);
        read(s, "z_samples", c.lur.z_samples);
        read(s, "norm_samples", c.lur.norm_samples);
        read(s, "probe_points", c.lur.probe_points);
        read(s, "probe_samples", c.lur.probe_samples);
        read(s, "modulus_points", c.lur.modulus_points);
        read(s, "lipschitz_slack", c.lur.lipschitz_slack);
        read(s, "tail_tol", c.lur.tail_tol);
        read(s, "homogeneity_tol", c.lur.homogeneity_tol);
    }
}

}  // namespace

RunConfig::RunConfig() { construction.budget_policy = "uncoupled"; }

void RunConfig::validate() const
{
    if (d < 1 || d > construction.d_max || d > kMaxDim)
        throw ConfigError("d must lie in [1, " + std::to_string(std::min(construction.d_max, kMaxDim)) + "]");
    try {
        base.validate(d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(base.eps0 > 0.0)) throw ConfigError("eps0 must be positive");
    if (E.has_value() != Phi.has_value()) throw ConfigError("system needs both E and Phi");
    const ConstructionConfig& c = construction;
    if (!(c.eps_global > 0.0 && c.eps_global < 1.0)) throw ConfigError("eps_global must lie in (0, 1)");
    if (!(c.mesh_h > 0.0)) throw ConfigError("mesh_h must be positive");
    if (!(c.cover_margin > 0.0 && c.cover_margin < 1.0)) throw ConfigError("cover_margin must lie in (0, 1)");
    if (!(c.ribbon_margin > 0.0 && c.ribbon_margin < 1.0)) throw ConfigError("ribbon_margin must lie in (0, 1)");
    if (!(c.enlarge_fraction > 0.0 && c.enlarge_fraction <= 1.0))
        throw ConfigError("enlarge_fraction must lie in (0, 1]");
    if (c.budget_policy != "strict" && c.budget_policy != "uncoupled")
        throw ConfigError("budget_policy must be 'strict' or 'uncoupled'");
    for (const auto& st : stages)
        if (!kStages.count(st)) throw ConfigError("unknown stage '" + st + "'");
    if (stages.empty()) throw ConfigError("no stages selected");
    if ((has("polyhedral") || has("smooth")) && !has("atlas")) throw ConfigError("polyhedral and smooth need atlas");
    if (lur_ambient != "smooth" && lur_ambient != "base") throw ConfigError("lur ambient must be 'smooth' or 'base'");
    if (has("lur") && lur_ambient == "smooth" && !has("smooth")) throw ConfigError("lur with smooth ambient needs smooth");
    try {
        lur.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale)) throw ConfigError("tolerance scale must be positive");
    const int counts[] = {checks.construction_samples, checks.compatibility_samples, checks.polyhedral_samples,
                          checks.polyhedral_sandwich,  checks.lfc_points,            checks.lfc_neighbors,
                          checks.equivalence_samples,  checks.modulus_pairs,         checks.diameter_samples};
    for (int n : counts)
        if (n < 0) throw ConfigError("sample counts must be nonnegative");
}

json RunConfig::to_json() const
{
    json b = {{"kind", to_string(base.kind)}, {"p", base.p}, {"weights", base.weights}, {"eps0", base.eps0}};
    json j;
    j["schema"] = kConfigSchema;
    j["d"] = d;
    j["base"] = b;
    if (E) j["system"] = {{"E", matrix_json(*E)}, {"Phi", matrix_json(*Phi)}};
    j["eps_global"] = construction.eps_global;
    j["mesh_h"] = construction.mesh_h;
    j["cover_margin"] = construction.cover_margin;
    j["ribbon_margin"] = construction.ribbon_margin;
    j["enlarge_fraction"] = construction.enlarge_fraction;
    j["budget_policy"] = construction.budget_policy;
    j["seed"] = seed;
    j["stages"] = std::vector<std::string>(stages.begin(), stages.end());
    json l = lur.to_json();
    l["ambient"] = lur_ambient;
    j["lur"] = l;
    json c = {{"construction_samples", checks.construction_samples},
              {"compatibility_samples", checks.compatibility_samples},
              {"polyhedral_samples", checks.polyhedral_samples},
              {"polyhedral_sandwich", checks.polyhedral_sandwich},
              {"lfc_points", checks.lfc_points},
              {"lfc_neighbors", checks.lfc_neighbors},
              {"equivalence_samples", checks.equivalence_samples},
              {"modulus_pairs", checks.modulus_pairs},
              {"diameter_samples", checks.diameter_samples},
              {"smooth", smooth_checks_json(checks.smooth)},
              {"lur", lur_checks_json(checks.lur)}};
    j["checks"] = c;
    j["tolerance_scale"] = tolerance_scale;
    return j;
}

std::set<std::string> parse_stages(const std::string& list)
{
    std::set<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (!kStages.count(item)) throw ConfigError("unknown stage '" + item + "'");
        out.insert(item);
    }
    if (out.empty()) throw ConfigError("no stages selected");
    return out;
}

RunConfig config_from_json(const json& j)
{
    only_keys(j,
              {"schema", "d", "base", "system", "eps_global", "mesh_h", "cover_margin", "ribbon_margin",
               "enlarge_fraction", "budget_policy", "seed", "stages", "lur", "checks", "out", "tolerance_scale"},
              "config");
    RunConfig c;
    if (j.contains("schema") && j["schema"] != kConfigSchema) throw ConfigError("unsupported config schema");
    read(j, "d", c.d);
    if (c.d < 1 || c.d > kMaxDim) throw ConfigError("d must lie in [1, " + std::to_string(kMaxDim) + "]");
    if (j.contains("base")) {
        const json& b = j["base"];
        only_keys(b, {"kind", "p", "weights", "eps0"}, "base");
        std::string kind = "euclidean";
        read(b, "kind", kind);
        try {
            c.base.kind = base_kind_from_string(kind);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        read(b, "p", c.base.p);
        read(b, "weights", c.base.weights);
        read(b, "eps0", c.base.eps0);
    }
    if (j.contains("system")) {
        only_keys(j["system"], {"E", "Phi"}, "system");
        if (!j["system"].contains("E") || !j["system"].contains("Phi")) throw ConfigError("system needs both E and Phi");
        c.E = read_matrix(j["system"]["E"], c.d, "E");
        c.Phi = read_matrix(j["system"]["Phi"], c.d, "Phi");
    }
    read(j, "eps_global", c.construction.eps_global);
    read(j, "mesh_h", c.construction.mesh_h);
    read(j, "cover_margin", c.construction.cover_margin);
    read(j, "ribbon_margin", c.construction.ribbon_margin);
    read(j, "enlarge_fraction", c.construction.enlarge_fraction);
    read(j, "budget_policy", c.construction.budget_policy);
    read(j, "seed", c.seed);
    c.construction.seed = c.seed;
    if (j.contains("stages")) {
        std::vector<std::string> st;
        read(j, "stages", st);
        c.stages = std::set<std::string>(st.begin(), st.end());
    }
    if (j.contains("lur")) {
        const json& l = j["lur"];
        only_keys(l, {"K", "eps", "rho_n", "theta_nm", "kappa_nm", "ambient"}, "lur");
        int K = c.lur.K;
        double eps = c.lur.eps;
        read(l, "K", K);
        read(l, "eps", eps);
        if (K < 1 || K > 64) throw ConfigError("lur K must lie in [1, 64]");
        c.lur = LurParams::defaults(K, eps);
        if (l.contains("rho_n")) {
            const json& r = l["rho_n"];
            if (r.is_number()) {
                c.lur.rho.assign(K, r.get<double>());
            } else if (r.is_array() && int(r.size()) == K) {
                for (int n = 0; n < K; ++n) {
                    if (!r[n].is_number()) throw ConfigError("rho_n entries must be numbers");
                    c.lur.rho[n] = r[n].get<double>();
                }
            } else {
                throw ConfigError("rho_n must be a number or an array of length K");
            }
            // kappa keeps its default shape rho_n / (m + 1) unless given.
            for (int n = 0; n < K; ++n)
                for (int m = 0; m < K; ++m) c.lur.kappa[n][m] = c.lur.rho[n] / (m + 2);
        }
        if (l.contains("theta_nm")) c.lur.theta = read_table(l["theta_nm"], K, "theta_nm");
        if (l.contains("kappa_nm")) c.lur.kappa = read_table(l["kappa_nm"], K, "kappa_nm");
        read(l, "ambient", c.lur_ambient);
    }
    if (j.contains("checks")) read_checks(j["checks"], c.checks);
    read(j, "out", c.out_dir);
    read(j, "tolerance_scale", c.tolerance_scale);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

CheckSizes effective_checks(const RunConfig& cfg)
{
    const double k = cfg.tolerance_scale;
    CheckSizes c = cfg.checks;
    c.smooth.gradient_tol *= k;
    c.smooth.locality_tol *= k;
    c.smooth.lfc_tol *= k;
    c.lur.lipschitz_slack *= k;
    c.lur.tail_tol *= k;
    c.lur.homogeneity_tol *= k;
    return c;
}

}  // namespace renorm
