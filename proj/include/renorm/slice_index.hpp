#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "renorm/atlas.hpp"

namespace renorm {

// Hash grid over unit directions w_j with thresholds kappa_j. A query at y returns a
// superset of {j : <w_j, y> > factor * kappa_j}; callers apply the exact test.
class DirectionIndex {
public:
    DirectionIndex() = default;
    DirectionIndex(int d, const std::vector<Vec>& dirs, const std::vector<double>& kappas, double max_radius);

    template <class Visit>
    void query(const Vec& y, double factor, Visit&& visit) const
    {
        if (ids_.empty()) return;
        const double n = y.norm();
        const double c = kmin_ * factor / n;
        if (!(n > 0.0) || c >= 1.0) return;
        if (c <= 0.0) {
            for (int id : ids_) visit(id);
            return;
        }
        const double R = std::acos(c);
        const double chord = 2.0 * std::sin(0.5 * R) * (1.0 + 1e-9) + 1e-12;
        const Vec u = y / n;
        long lo[kMaxDim], hi[kMaxDim];
        double count = 1.0;
        for (int i = 0; i < d_; ++i) {
            if (!active_[i]) {
                if (std::abs(u[i]) >= chord) return;
                lo[i] = hi[i] = 0;
                continue;
            }
            lo[i] = static_cast<long>(std::floor((u[i] - chord) / g_));
            hi[i] = static_cast<long>(std::floor((u[i] + chord) / g_));
            count *= double(hi[i] - lo[i] + 1);
        }
        if (count > scan_limit_) {
            for (int id : ids_) visit(id);
            return;
        }
        long cur[kMaxDim];
        for (int i = 0; i < d_; ++i) cur[i] = lo[i];
        while (true) {
            auto it = cells_.find(key(cur));
            if (it != cells_.end())
                for (int k = it->second.first; k < it->second.second; ++k) visit(ids_[k]);
            int i = 0;
            for (; i < d_; ++i) {
                if (cur[i] < hi[i]) {
                    ++cur[i];
                    break;
                }
                cur[i] = lo[i];
            }
            if (i == d_) break;
        }
    }

    std::size_t size() const { return ids_.size(); }
    double cell_size() const { return g_; }

private:
    std::uint64_t key(const long* c) const
    {
        std::uint64_t k = 0;
        for (int i = 0; i < d_; ++i) k = (k << 16) | std::uint64_t((c[i] + 32768) & 0xffff);
        return k;
    }

    int d_ = 0;
    double g_ = 1.0;
    double kmin_ = 0.0;
    double scan_limit_ = 0.0;
    bool active_[kMaxDim] = {false, false, false, false};
    std::vector<int> ids_;
    std::unordered_map<std::uint64_t, std::pair<int, int>> cells_;
};

// One direction index per subspace record, built over sign * psi of its slices.
class AtlasIndex {
public:
    AtlasIndex() = default;
    explicit AtlasIndex(const SliceAtlas& atlas);

    void build_record(const SliceAtlas& atlas, int r);

    // Visits slice indices of record r that may satisfy sign <psi, y> > factor (1 - delta).
    template <class Visit>
    void visit(int r, const Vec& y, double factor, Visit&& v) const
    {
        per_record_[r].query(y, factor, v);
    }

    std::size_t records() const { return per_record_.size(); }

private:
    std::vector<DirectionIndex> per_record_;
};

}  // namespace renorm
