#include "renorm/slice_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace renorm {

DirectionIndex::DirectionIndex(int d, const std::vector<Vec>& dirs, const std::vector<double>& kappas, double max_radius)
    : d_(d)
{
    if (dirs.size() != kappas.size()) throw std::invalid_argument("DirectionIndex: size mismatch");
    if (dirs.empty()) return;
    kmin_ = *std::min_element(kappas.begin(), kappas.end());
    // Cell size matches the widest cap a query inside the ball can reach.
    double widest = 0.0;
    for (double k : kappas) {
        const double c = std::clamp(k / max_radius, -1.0, 1.0);
        widest = std::max(widest, 2.0 * std::sin(0.5 * std::acos(c)));
    }
    g_ = std::clamp(widest, 1e-4, 0.5);
    for (const auto& w : dirs)
        for (int i = 0; i < d; ++i)
            if (w[i] != 0.0) active_[i] = true;
    scan_limit_ = std::max(64.0, 0.25 * double(dirs.size()));

    std::vector<std::pair<std::uint64_t, int>> keyed(dirs.size());
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        long c[kMaxDim];
        for (int i = 0; i < d; ++i) c[i] = static_cast<long>(std::floor(dirs[j][i] / g_));
        keyed[j] = {key(c), static_cast<int>(j)};
    }
    std::sort(keyed.begin(), keyed.end());
    ids_.resize(keyed.size());
    for (std::size_t j = 0; j < keyed.size(); ++j) ids_[j] = keyed[j].second;
    std::size_t start = 0;
    for (std::size_t j = 1; j <= keyed.size(); ++j)
        if (j == keyed.size() || keyed[j].first != keyed[start].first) {
            cells_.emplace(keyed[start].first, std::make_pair(int(start), int(j)));
            start = j;
        }
}

AtlasIndex::AtlasIndex(const SliceAtlas& atlas)
{
    per_record_.resize(atlas.records.size());
    for (std::size_t r = 0; r < atlas.records.size(); ++r) build_record(atlas, static_cast<int>(r));
}

void AtlasIndex::build_record(const SliceAtlas& atlas, int r)
{
    if (per_record_.size() < atlas.records.size()) per_record_.resize(atlas.records.size());
    const auto& omega = atlas.records[r].omega;
    std::vector<Vec> dirs;
    std::vector<double> kappas;
    dirs.reserve(omega.size());
    kappas.reserve(omega.size());
    for (const auto& S : omega) {
        const double n = S.psi.norm();
        dirs.push_back(S.sign * S.psi / n);
        kappas.push_back((1.0 - S.delta) / n);
    }
    per_record_[r] = DirectionIndex(atlas.d, dirs, kappas, 1.0 / atlas.space.ell_sys);
}

int SliceAtlas::find(SubspaceId F) const
{
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].F == F) return static_cast<int>(i);
    return -1;
}

const SubspaceRecord& SliceAtlas::at(SubspaceId F) const
{
    const int i = find(F);
    if (i < 0) throw std::out_of_range("subspace not in atlas: " + F.label());
    return records[i];
}

std::size_t SliceAtlas::total_slices() const
{
    std::size_t n = 0;
    for (const auto& r : records) n += r.omega.size();
    return n;
}

bool tube_membership(const Point& y, const Tube& tube, const Space& s)
{
    if (s.norm(y) > 1.0) return false;
    return dist_to_subspace(s, y, tube.F).dist < tube.theta;
}

}  // namespace renorm
