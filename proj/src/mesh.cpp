#include "renorm/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "renorm/rng.hpp"

namespace renorm {

namespace {

Point embed(const Space& s, const std::vector<int>& idx, const Eigen::Vector3d& u)
{
    Point p = Point::Zero(s.d);
    for (std::size_t i = 0; i < idx.size(); ++i) p[idx[i]] = u[static_cast<int>(i)];
    return p;
}

void build_adjacency(SphereMesh& m)
{
    const int nv = static_cast<int>(m.pts.size());
    const std::size_t nc = m.num_cells();
    m.vc_off.assign(nv + 1, 0);
    for (int v : m.cells) ++m.vc_off[v + 1];
    for (int i = 0; i < nv; ++i) m.vc_off[i + 1] += m.vc_off[i];
    m.vc_idx.assign(m.cells.size(), 0);
    std::vector<int> fill(m.vc_off.begin(), m.vc_off.end() - 1);
    for (std::size_t c = 0; c < nc; ++c)
        for (int k = 0; k < m.arity; ++k) m.vc_idx[fill[m.cell(c)[k]]++] = static_cast<int>(c);

    std::vector<std::vector<int>> nb(nv);
    for (std::size_t c = 0; c < nc; ++c) {
        const int* v = m.cell(c);
        for (int a = 0; a < m.arity; ++a)
            for (int b = 0; b < m.arity; ++b)
                if (a != b) nb[v[a]].push_back(v[b]);
    }
    m.vn_off.assign(nv + 1, 0);
    for (int i = 0; i < nv; ++i) {
        auto& l = nb[i];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        m.vn_off[i + 1] = m.vn_off[i] + static_cast<int>(l.size());
    }
    m.vn_idx.reserve(m.vn_off[nv]);
    for (auto& l : nb) m.vn_idx.insert(m.vn_idx.end(), l.begin(), l.end());
}

double measure_spacing(const Space& s, const SphereMesh& m)
{
    double h = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const int* v = m.cell(c);
        for (int a = 0; a < m.arity; ++a)
            for (int b = a + 1; b < m.arity; ++b) h = std::max(h, s.norm(m.pts[v[a]] - m.pts[v[b]]));
    }
    return h;
}

SphereMesh build_circle(const Space& s, SubspaceId F, int K)
{
    const auto idx = F.members();
    SphereMesh m;
    m.F = F;
    m.dim = 2;
    m.arity = 2;
    m.resolution = K;
    const int half = K / 2;
    m.pts.resize(K);
    for (int i = 0; i < half; ++i) {
        const double a = 2.0 * std::numbers::pi * i / K;
        Point u = embed(s, idx, Eigen::Vector3d(std::cos(a), std::sin(a), 0.0));
        m.pts[i] = u / s.norm(u);
        m.pts[i + half] = -m.pts[i];
    }
    m.anti_vertex.resize(K);
    m.anti_cell.resize(K);
    for (int i = 0; i < K; ++i) {
        m.cells.push_back(i);
        m.cells.push_back((i + 1) % K);
        m.anti_vertex[i] = (i + half) % K;
        m.anti_cell[i] = (i + half) % K;
    }
    build_adjacency(m);
    m.spacing = measure_spacing(s, m);
    return m;
}

constexpr std::array<std::array<int, 3>, 20> kIcoFaces = {{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                                            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                                            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                                            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}}};

std::uint64_t cell_key(int a, int b, int c)
{
    std::array<int, 3> v{a, b, c};
    std::sort(v.begin(), v.end());
    return (std::uint64_t(v[0]) << 42) | (std::uint64_t(v[1]) << 21) | std::uint64_t(v[2]);
}

SphereMesh build_icosphere(const Space& s, SubspaceId F, int k)
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const std::array<Eigen::Vector3d, 12> base = {
        Eigen::Vector3d(-1, phi, 0), Eigen::Vector3d(1, phi, 0),   Eigen::Vector3d(-1, -phi, 0), Eigen::Vector3d(1, -phi, 0),
        Eigen::Vector3d(0, -1, phi), Eigen::Vector3d(0, 1, phi),   Eigen::Vector3d(0, -1, -phi), Eigen::Vector3d(0, 1, -phi),
        Eigen::Vector3d(phi, 0, -1), Eigen::Vector3d(phi, 0, 1),   Eigen::Vector3d(-phi, 0, -1), Eigen::Vector3d(-phi, 0, 1)};

    std::vector<Eigen::Vector3d> u(base.begin(), base.end());
    std::unordered_map<int, int> edge_base;  // key lo*12+hi -> first index of interior edge points
    auto edge_point = [&](int a, int b, int t) {
        // t in (0,k) measured from a
        const int lo = std::min(a, b), hi = std::max(a, b);
        const int key = lo * 12 + hi;
        auto it = edge_base.find(key);
        if (it == edge_base.end()) {
            const int start = static_cast<int>(u.size());
            for (int m = 1; m < k; ++m) u.push_back(base[lo] + (double(m) / k) * (base[hi] - base[lo]));
            it = edge_base.emplace(key, start).first;
        }
        const int m = (a == lo) ? t : k - t;
        return it->second + m - 1;
    };

    SphereMesh mesh;
    mesh.F = F;
    mesh.dim = 3;
    mesh.arity = 3;
    mesh.resolution = k;
    mesh.cells.reserve(std::size_t(20) * k * k * 3);
    std::vector<int> grid((k + 1) * (k + 1));
    for (const auto& f : kIcoFaces) {
        const int A = f[0], B = f[1], C = f[2];
        for (int i = 0; i <= k; ++i)
            for (int j = 0; i + j <= k; ++j) {
                int id;
                if (i == 0 && j == 0) id = A;
                else if (i == k) id = B;
                else if (j == k) id = C;
                else if (j == 0) id = edge_point(A, B, i);
                else if (i == 0) id = edge_point(A, C, j);
                else if (i + j == k) id = edge_point(B, C, j);
                else {
                    id = static_cast<int>(u.size());
                    u.push_back(base[A] + (double(i) / k) * (base[B] - base[A]) + (double(j) / k) * (base[C] - base[A]));
                }
                grid[i * (k + 1) + j] = id;
            }
        for (int i = 0; i < k; ++i)
            for (int j = 0; i + j < k; ++j) {
                mesh.cells.insert(mesh.cells.end(), {grid[i * (k + 1) + j], grid[(i + 1) * (k + 1) + j], grid[i * (k + 1) + j + 1]});
                if (i + j < k - 1)
                    mesh.cells.insert(mesh.cells.end(), {grid[(i + 1) * (k + 1) + j], grid[(i + 1) * (k + 1) + j + 1],
                                                         grid[i * (k + 1) + j + 1]});
            }
    }
    for (auto& v : u) v.normalize();

    // Antipodes by hashed lookup, then exact negation.
    const int nv = static_cast<int>(u.size());
    const double scale = 1048576.0;
    auto key = [&](long x, long y, long z) { return (std::uint64_t(x + (1 << 21)) << 42) | (std::uint64_t(y + (1 << 21)) << 21) | std::uint64_t(z + (1 << 21)); };
    std::unordered_map<std::uint64_t, int> lookup;
    lookup.reserve(nv * 2);
    for (int i = 0; i < nv; ++i) lookup[key(std::lround(u[i].x() * scale), std::lround(u[i].y() * scale), std::lround(u[i].z() * scale))] = i;
    mesh.anti_vertex.assign(nv, -1);
    for (int i = 0; i < nv; ++i) {
        const long x = std::lround(-u[i].x() * scale), y = std::lround(-u[i].y() * scale), z = std::lround(-u[i].z() * scale);
        int best = -1;
        double bd = 1e300;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = lookup.find(key(x + dx, y + dy, z + dz));
                    if (it == lookup.end()) continue;
                    const double dd = (u[it->second] + u[i]).norm();
                    if (dd < bd) bd = dd, best = it->second;
                }
        if (best < 0 || bd > 1e-9) throw MeshError("icosphere antipode lookup failed");
        mesh.anti_vertex[i] = best;
    }
    for (int i = 0; i < nv; ++i)
        if (i < mesh.anti_vertex[i]) u[mesh.anti_vertex[i]] = -u[i];

    const auto idx = F.members();
    mesh.pts.resize(nv);
    for (int i = 0; i < nv; ++i) {
        if (i > mesh.anti_vertex[i]) continue;
        Point p = embed(s, idx, u[i]);
        mesh.pts[i] = p / s.norm(p);
        mesh.pts[mesh.anti_vertex[i]] = -mesh.pts[i];
    }

    const std::size_t nc = mesh.num_cells();
    std::unordered_map<std::uint64_t, int> cmap;
    cmap.reserve(nc * 2);
    for (std::size_t c = 0; c < nc; ++c) {
        const int* v = mesh.cell(c);
        cmap[cell_key(v[0], v[1], v[2])] = static_cast<int>(c);
    }
    mesh.anti_cell.assign(nc, -1);
    for (std::size_t c = 0; c < nc; ++c) {
        const int* v = mesh.cell(c);
        auto it = cmap.find(cell_key(mesh.anti_vertex[v[0]], mesh.anti_vertex[v[1]], mesh.anti_vertex[v[2]]));
        if (it == cmap.end()) throw MeshError("icosphere is not antipodally closed");
        mesh.anti_cell[c] = it->second;
    }
    build_adjacency(mesh);
    mesh.spacing = measure_spacing(s, mesh);
    return mesh;
}

SphereMesh build_random(const Space& s, SubspaceId F, double h, std::uint64_t seed, std::size_t max_cells)
{
    const auto idx = F.members();
    const int k = F.dim();
    // Rough count for an h-net of the (k-1)-sphere.
    const double area = 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
    const double n = 4.0 * area / std::pow(h * s.ell_sys / s.L_sys, k - 1);
    if (n > double(max_cells)) throw MeshError("random mesh exceeds the cell cap");
    const int half = static_cast<int>(std::ceil(n / 2));
    CounterRng rng(seed, F.mask, "random_mesh");
    SphereMesh m;
    m.F = F;
    m.dim = k;
    m.arity = 1;
    m.certified = false;
    m.pts.resize(2 * half);
    m.anti_vertex.resize(2 * half);
    m.anti_cell.resize(2 * half);
    for (int i = 0; i < half; ++i) {
        Point u = Point::Zero(s.d);
        for (int a : idx) u[a] = rng.normal();
        m.pts[i] = u / s.norm(u);
        m.pts[i + half] = -m.pts[i];
        m.anti_vertex[i] = i + half;
        m.anti_vertex[i + half] = i;
    }
    for (int i = 0; i < 2 * half; ++i) {
        m.cells.push_back(i);
        m.anti_cell[i] = m.anti_vertex[i];
    }
    build_adjacency(m);
    m.spacing = h;
    return m;
}

int circle_count(const Space& s, double h)
{
    int K = static_cast<int>(std::ceil(2.0 * std::numbers::pi * s.L_sys / (s.ell_sys * h)));
    return std::max(4, K + (K & 1));
}

int icosphere_frequency(const Space& s, double h)
{
    return std::max(1, static_cast<int>(std::ceil(1.0515 * 1.2 * s.L_sys / (s.ell_sys * h))));
}

}  // namespace

double estimate_mesh_cells(const Space& s, SubspaceId F, double h)
{
    switch (F.dim()) {
    case 1: return 2.0;
    case 2: return circle_count(s, h);
    case 3: {
        const double k = icosphere_frequency(s, h);
        return 20.0 * k * k;
    }
    default: {
        const int k = F.dim();
        const double area = 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
        return 4.0 * area / std::pow(h * s.ell_sys / s.L_sys, k - 1);
    }
    }
}

SphereMesh mesh_sphere(const Space& s, SubspaceId F, double h, bool allow_random, std::size_t max_cells, std::uint64_t seed)
{
    if (!(h > 0.0)) throw std::invalid_argument("mesh spacing must be positive");
    const int k = F.dim();
    if (k == 1) {
        const int a = F.members()[0];
        SphereMesh m;
        m.F = F;
        m.dim = 1;
        m.arity = 1;
        m.resolution = 2;
        const Point e = s.unit(a);
        m.pts = {e / s.norm(e), -(e / s.norm(e))};
        m.cells = {0, 1};
        m.anti_vertex = {1, 0};
        m.anti_cell = {1, 0};
        build_adjacency(m);
        return m;
    }
    if (k == 2) {
        int K = circle_count(s, h);
        for (int tries = 0; tries < 20; ++tries) {
            if (double(K) > double(max_cells)) throw MeshError("circle mesh exceeds the cell cap");
            SphereMesh m = build_circle(s, F, K);
            if (m.spacing <= h) return m;
            K = static_cast<int>(std::ceil(K * m.spacing / h * 1.01));
            K += K & 1;
        }
        throw MeshError("circle mesh did not reach the requested spacing");
    }
    if (k == 3) {
        int f = icosphere_frequency(s, h);
        for (int tries = 0; tries < 20; ++tries) {
            if (20.0 * f * f > double(max_cells)) throw MeshError("icosphere exceeds the cell cap");
            SphereMesh m = build_icosphere(s, F, f);
            if (m.spacing <= h) return m;
            f = static_cast<int>(std::ceil(f * m.spacing / h * 1.01));
        }
        throw MeshError("icosphere did not reach the requested spacing");
    }
    if (!allow_random) throw MeshError("sphere meshes above dimension 3 need the random fallback");
    return build_random(s, F, h, seed, max_cells);
}

}  // namespace renorm
