#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace renorm {

// Coordinate subspace span{e_a : a in members}, stored as a bit mask.
struct SubspaceId {
    std::uint32_t mask = 0;

    SubspaceId() = default;
    explicit SubspaceId(std::uint32_t m) : mask(m) {}

    static SubspaceId from_members(const std::vector<int>& members)
    {
        std::uint32_t m = 0;
        for (int a : members) m |= (1u << a);
        return SubspaceId(m);
    }

    int dim() const { return std::popcount(mask); }
    bool contains(int a) const { return (mask >> a) & 1u; }
    bool subset_of(SubspaceId o) const { return (mask & ~o.mask) == 0; }
    bool proper_subset_of(SubspaceId o) const { return subset_of(o) && mask != o.mask; }
    SubspaceId intersect(SubspaceId o) const { return SubspaceId(mask & o.mask); }
    bool empty() const { return mask == 0; }

    std::vector<int> members() const
    {
        std::vector<int> out;
        for (int a = 0; a < 32; ++a)
            if (contains(a)) out.push_back(a);
        return out;
    }

    std::string label() const
    {
        std::string s = "{";
        bool first = true;
        for (int a : members()) {
            if (!first) s += ",";
            s += std::to_string(a);
            first = false;
        }
        return s + "}";
    }

    bool operator==(const SubspaceId& o) const = default;
};

// All nonempty subsets of {0..d-1}, by cardinality then lexicographically.
std::vector<SubspaceId> enumerate_lattice(int d, int d_max = 4);

}  // namespace renorm
