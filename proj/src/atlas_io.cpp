#include "renorm/atlas_io.hpp"

#include <fstream>
#include <stdexcept>

namespace renorm {

namespace {

json matrix_rows(const Mat& m)
{
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

Mat matrix_from(const json& rows, int d)
{
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw std::invalid_argument("matrix has wrong row count");
    Mat m(d, d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d) throw std::invalid_argument("matrix has wrong column count");
        for (int j = 0; j < d; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

json body_of(const SliceAtlas& a)
{
    json j;
    j["schema"] = kAtlasSchema;
    j["d"] = a.d;
    j["space"] = space_to_json(a.space);
    j["config"] = {{"eps_global", a.eps_global},       {"mesh_h", a.mesh_h},
                   {"cover_margin", a.cover_margin},   {"ribbon_margin", a.ribbon_margin},
                   {"enlarge_fraction", a.enlarge_fraction}, {"seed", a.seed},
                   {"budget_policy", a.budget_policy}};
    json recs = json::array();
    for (const auto& r : a.records) {
        json slices = json::array();
        for (const Slice& S : r.omega) {
            json row = json::array();
            for (int i = 0; i < a.d; ++i) row.push_back(S.x[i]);
            for (int i = 0; i < a.d; ++i) row.push_back(S.psi[i]);
            row.push_back(S.delta);
            row.push_back(S.sign);
            slices.push_back(row);
        }
        const auto& st = r.stats;
        recs.push_back({{"F", r.F.members()},
                        {"label", r.F.label()},
                        {"budget", {{"eps", r.budget.eps}, {"theta", r.budget.theta}, {"delta_F", r.budget.delta_F}}},
                        {"stats",
                         {{"slice_delta", st.slice_delta},
                          {"depth_cert", st.depth_cert},
                          {"mesh_spacing", st.mesh_spacing},
                          {"mesh_resolution", st.mesh_resolution},
                          {"mesh_points", st.mesh_points},
                          {"mesh_cells", st.mesh_cells},
                          {"refinements", st.refinements},
                          {"candidates", st.candidates},
                          {"shielded_out", st.shielded_out},
                          {"fallback_used", st.fallback_used},
                          {"covering_certified", st.covering_certified}}},
                        {"slices", slices}});
    }
    j["records"] = recs;
    return j;
}

}  // namespace

json space_to_json(const Space& s)
{
    json w = json::array();
    for (double x : s.base.weights) w.push_back(x);
    return {{"base", {{"kind", to_string(s.base.kind)}, {"p", s.base.p}, {"weights", w}, {"eps0", s.base.eps0}}},
            {"E", matrix_rows(s.E)},
            {"Phi", matrix_rows(s.Phi)},
            {"M", s.M},
            {"L", s.L},
            {"ell", s.ell},
            {"L_sys", s.L_sys},
            {"ell_sys", s.ell_sys}};
}

Space space_from_json(const json& j)
{
    Space s;
    const json& b = j.at("base");
    s.base.kind = base_kind_from_string(b.at("kind").get<std::string>());
    s.base.p = b.at("p").get<double>();
    s.base.weights = b.at("weights").get<std::vector<double>>();
    s.base.eps0 = b.at("eps0").get<double>();
    const int d = static_cast<int>(j.at("E").size());
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("stored dimension out of range");
    s.base.validate(d);
    s.d = d;
    s.E = matrix_from(j.at("E"), d);
    s.Phi = matrix_from(j.at("Phi"), d);
    s.E_inv_t = s.Phi.transpose();
    s.identity_frame = (s.E - Mat::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
    s.M = j.at("M").get<double>();
    s.L = j.at("L").get<double>();
    s.ell = j.at("ell").get<double>();
    s.L_sys = j.at("L_sys").get<double>();
    s.ell_sys = j.at("ell_sys").get<double>();
    s.quadratic = s.base.kind != BaseKind::PNorm;
    Mat D = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a) D(a, a) = (s.base.kind == BaseKind::Weighted ? s.base.weights[a] : 1.0) + s.base.eps0;
    s.Q = s.E.transpose() * D * s.E;
    s.Q_inv = s.Q.inverse();
    return s;
}

json atlas_to_json(const SliceAtlas& atlas)
{
    json j = body_of(atlas);
    j["content_hash"] = sha256_hex(j.dump());
    return j;
}

std::string atlas_hash(const SliceAtlas& atlas) { return sha256_hex(body_of(atlas).dump()); }

SliceAtlas atlas_from_json(const json& doc, bool check_hash)
{
    if (doc.at("schema").get<int>() != kAtlasSchema) throw std::invalid_argument("unsupported atlas schema");
    if (check_hash) {
        json body = doc;
        body.erase("content_hash");
        if (sha256_hex(body.dump()) != doc.at("content_hash").get<std::string>())
            throw std::invalid_argument("atlas content hash mismatch");
    }
    SliceAtlas a;
    a.d = doc.at("d").get<int>();
    a.space = space_from_json(doc.at("space"));
    if (a.space.d != a.d) throw std::invalid_argument("atlas dimension disagrees with its space");
    const json& c = doc.at("config");
    a.eps_global = c.at("eps_global").get<double>();
    a.mesh_h = c.at("mesh_h").get<double>();
    a.cover_margin = c.at("cover_margin").get<double>();
    a.ribbon_margin = c.at("ribbon_margin").get<double>();
    a.enlarge_fraction = c.at("enlarge_fraction").get<double>();
    a.seed = c.at("seed").get<std::uint64_t>();
    a.budget_policy = c.at("budget_policy").get<std::string>();
    for (const json& r : doc.at("records")) {
        SubspaceRecord rec;
        rec.F = SubspaceId::from_members(r.at("F").get<std::vector<int>>());
        const json& b = r.at("budget");
        rec.budget = {b.at("eps").get<double>(), b.at("theta").get<double>(), b.at("delta_F").get<double>()};
        const json& st = r.at("stats");
        rec.stats.slice_delta = st.at("slice_delta").get<double>();
        rec.stats.depth_cert = st.at("depth_cert").get<double>();
        rec.stats.mesh_spacing = st.at("mesh_spacing").get<double>();
        rec.stats.mesh_resolution = st.at("mesh_resolution").get<int>();
        rec.stats.mesh_points = st.at("mesh_points").get<std::size_t>();
        rec.stats.mesh_cells = st.at("mesh_cells").get<std::size_t>();
        rec.stats.refinements = st.at("refinements").get<int>();
        rec.stats.candidates = st.at("candidates").get<std::size_t>();
        rec.stats.shielded_out = st.at("shielded_out").get<std::size_t>();
        rec.stats.fallback_used = st.at("fallback_used").get<std::size_t>();
        rec.stats.covering_certified = st.at("covering_certified").get<bool>();
        for (const json& row : r.at("slices")) {
            if (static_cast<int>(row.size()) != 2 * a.d + 2) throw std::invalid_argument("slice row has wrong length");
            Slice S;
            S.x = Point(a.d);
            S.psi = Functional(a.d);
            for (int i = 0; i < a.d; ++i) {
                S.x[i] = row[i].get<double>();
                S.psi[i] = row[a.d + i].get<double>();
            }
            S.delta = row[2 * a.d].get<double>();
            S.sign = row[2 * a.d + 1].get<int>();
            rec.omega.push_back(S);
        }
        a.records.push_back(std::move(rec));
    }
    return a;
}

void save_atlas(const SliceAtlas& atlas, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << atlas_to_json(atlas).dump() << '\n';
}

SliceAtlas load_atlas(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return atlas_from_json(json::parse(in));
}

}  // namespace renorm
