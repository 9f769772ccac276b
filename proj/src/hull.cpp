#include "renorm/hull.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace renorm {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
}

template <int D>
std::vector<Eigen::Matrix<double, D, 1>> merge_close(const std::vector<Eigen::Matrix<double, D, 1>>& v, double tol)
{
    using P = Eigen::Matrix<double, D, 1>;
    double scale = 0.0;
    for (const P& p : v) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double cell = std::max(tol * std::max(scale, 1.0), 1e-300);
    auto key = [&](const long* c) {
        std::uint64_t k = 1469598103934665603ull;
        for (int i = 0; i < D; ++i) k = (k ^ std::uint64_t(c[i])) * 1099511628211ull;
        return k;
    };
    std::unordered_multimap<std::uint64_t, int> grid;
    std::vector<P> out;
    for (const P& p : v) {
        long c[D];
        for (int i = 0; i < D; ++i) c[i] = static_cast<long>(std::floor(p[i] / cell));
        bool dup = false;
        long n[D];
        const int total = D == 2 ? 9 : 27;
        for (int t = 0; t < total && !dup; ++t) {
            int r = t;
            for (int i = 0; i < D; ++i) {
                n[i] = c[i] + (r % 3) - 1;
                r /= 3;
            }
            auto range = grid.equal_range(key(n));
            for (auto it = range.first; it != range.second; ++it)
                if ((out[it->second] - p).cwiseAbs().maxCoeff() <= cell) {
                    dup = true;
                    break;
                }
        }
        if (dup) continue;
        grid.emplace(key(c), static_cast<int>(out.size()));
        out.push_back(p);
    }
    return out;
}

struct Face {
    int v[3];
    int nb[3];
    Eigen::Vector3d n;
    double off;
    std::vector<int> outside;
    bool alive = true;
    int mark = 0;
};

}  // namespace

std::vector<Eigen::Vector2d> polar_vertices_2d(const std::vector<Eigen::Vector2d>& q, double merge_tol)
{
    std::vector<Eigen::Vector2d> p = q;
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) throw HullError("fewer than three distinct points");
    std::vector<Eigen::Vector2d> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    std::vector<Eigen::Vector2d> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Eigen::Vector2d& a = h[i];
        const Eigen::Vector2d& b = h[(i + 1) % h.size()];
        Eigen::Matrix2d A;
        A.row(0) = a.transpose();
        A.row(1) = b.transpose();
        const double det = A.determinant();
        if (!(det > 0.0)) throw HullError("origin is not interior to the hull");
        out.push_back(A.inverse() * Eigen::Vector2d(1.0, 1.0));
    }
    return merge_close<2>(out, merge_tol);
}

Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& pts)
{
    const int np = static_cast<int>(pts.size());
    if (np < 4) throw HullError("fewer than four points");
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double eps = 1e-13 * std::max(scale, 1.0);

    int i0 = 0, i1 = 0;
    for (int i = 0; i < np; ++i) {
        if (pts[i].x() < pts[i0].x()) i0 = i;
        if (pts[i].x() > pts[i1].x()) i1 = i;
    }
    const Eigen::Vector3d dir = (pts[i1] - pts[i0]).normalized();
    int i2 = -1;
    double best = 0.0;
    for (int i = 0; i < np; ++i) {
        const Eigen::Vector3d w = pts[i] - pts[i0];
        const double dd = (w - w.dot(dir) * dir).norm();
        if (dd > best) best = dd, i2 = i;
    }
    if (i2 < 0 || best <= eps) throw HullError("points are collinear");
    const Eigen::Vector3d pn = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
    int i3 = -1;
    best = 0.0;
    for (int i = 0; i < np; ++i) {
        const double dd = std::abs((pts[i] - pts[i0]).dot(pn));
        if (dd > best) best = dd, i3 = i;
    }
    if (i3 < 0 || best <= eps) throw HullError("points are coplanar");
    const Eigen::Vector3d inner = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);

    std::vector<Face> F;
    auto make_face = [&](int a, int b, int c) {
        Face f;
        Eigen::Vector3d n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
        if (n.dot(pts[a] - inner) < 0.0) {
            std::swap(b, c);
            n = -n;
        }
        f.v[0] = a, f.v[1] = b, f.v[2] = c;
        f.n = n.normalized();
        f.off = f.n.dot(pts[a]);
        f.nb[0] = f.nb[1] = f.nb[2] = -1;
        return f;
    };
    const int tet[4] = {i0, i1, i2, i3};
    for (int k = 0; k < 4; ++k) {
        int o[3], m = 0;
        for (int t = 0; t < 4; ++t)
            if (t != k) o[m++] = tet[t];
        F.push_back(make_face(o[0], o[1], o[2]));
    }
    {
        std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
        for (int f = 0; f < 4; ++f)
            for (int e = 0; e < 3; ++e)
                edges[(std::uint64_t(F[f].v[e]) << 32) | std::uint32_t(F[f].v[(e + 1) % 3])] = {f, e};
        for (int f = 0; f < 4; ++f)
            for (int e = 0; e < 3; ++e)
                F[f].nb[e] = edges.at((std::uint64_t(F[f].v[(e + 1) % 3]) << 32) | std::uint32_t(F[f].v[e])).first;
    }
    for (int i = 0; i < np; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        for (int f = 0; f < 4; ++f)
            if (F[f].n.dot(pts[i]) - F[f].off > eps) {
                F[f].outside.push_back(i);
                break;
            }
    }

    std::vector<int> stack = {0, 1, 2, 3};
    int mark = 0;
    std::vector<int> visible, dfs;
    std::vector<std::array<int, 3>> horizon;  // (a, b, neighbour face)
    while (!stack.empty()) {
        const int f0 = stack.back();
        stack.pop_back();
        if (!F[f0].alive || F[f0].outside.empty()) continue;
        int far = -1;
        double fd = -1.0;
        for (int i : F[f0].outside) {
            const double dd = F[f0].n.dot(pts[i]) - F[f0].off;
            if (dd > fd) fd = dd, far = i;
        }
        const Eigen::Vector3d& p = pts[far];
        ++mark;
        visible.clear();
        horizon.clear();
        dfs.assign(1, f0);
        F[f0].mark = mark;
        while (!dfs.empty()) {
            const int f = dfs.back();
            dfs.pop_back();
            visible.push_back(f);
            for (int e = 0; e < 3; ++e) {
                const int g = F[f].nb[e];
                if (F[g].mark == mark) continue;
                if (F[g].n.dot(p) - F[g].off > eps) {
                    F[g].mark = mark;
                    dfs.push_back(g);
                }
            }
        }
        for (int f : visible)
            for (int e = 0; e < 3; ++e) {
                const int g = F[f].nb[e];
                if (F[g].mark != mark) horizon.push_back({F[f].v[e], F[f].v[(e + 1) % 3], g});
            }
        std::unordered_map<int, int> start_at, end_at;
        const int first_new = static_cast<int>(F.size());
        for (const auto& h : horizon) {
            Face nf;
            nf.v[0] = h[0], nf.v[1] = h[1], nf.v[2] = far;
            const Eigen::Vector3d n = (pts[h[1]] - pts[h[0]]).cross(p - pts[h[0]]);
            nf.n = n.normalized();
            nf.off = nf.n.dot(pts[h[0]]);
            nf.nb[0] = h[2];
            nf.nb[1] = nf.nb[2] = -1;
            const int id = static_cast<int>(F.size());
            Face& g = F[h[2]];
            for (int e = 0; e < 3; ++e)
                if (g.v[e] == h[1] && g.v[(e + 1) % 3] == h[0]) g.nb[e] = id;
            start_at[h[0]] = id;
            end_at[h[1]] = id;
            F.push_back(std::move(nf));
        }
        for (int id = first_new; id < static_cast<int>(F.size()); ++id) {
            F[id].nb[1] = start_at.at(F[id].v[1]);
            F[id].nb[2] = end_at.at(F[id].v[0]);
        }
        for (int f : visible) {
            F[f].alive = false;
            for (int i : F[f].outside) {
                if (i == far) continue;
                for (int id = first_new; id < static_cast<int>(F.size()); ++id)
                    if (F[id].n.dot(pts[i]) - F[id].off > eps) {
                        F[id].outside.push_back(i);
                        break;
                    }
            }
            std::vector<int>().swap(F[f].outside);
        }
        for (int id = first_new; id < static_cast<int>(F.size()); ++id)
            if (!F[id].outside.empty()) stack.push_back(id);
    }
    Hull3 out;
    for (const Face& f : F)
        if (f.alive) {
            out.faces.push_back({f.v[0], f.v[1], f.v[2]});
            out.normals.push_back(f.n);
            out.offsets.push_back(f.off);
        }
    return out;
}

std::vector<Eigen::Vector3d> polar_vertices_3d(const std::vector<Eigen::Vector3d>& q, double merge_tol)
{
    const Hull3 h = convex_hull_3d(q);
    std::vector<Eigen::Vector3d> out;
    out.reserve(h.faces.size());
    for (std::size_t f = 0; f < h.faces.size(); ++f) {
        if (!(h.offsets[f] > 0.0)) throw HullError("origin is not interior to the hull");
        out.push_back(h.normals[f] / h.offsets[f]);
    }
    return merge_close<3>(out, merge_tol);
}

}  // namespace renorm
