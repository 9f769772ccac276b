#pragma once

#include <cstdint>
#include <vector>

#include "renorm/atlas.hpp"
#include "renorm/certificate.hpp"
#include "renorm/slice_index.hpp"

namespace renorm {

constexpr double kLinearTol = 1e-12;

enum class ScopeKind { Single, Level, Full };

// Which slice families enter a body: G ⊆ F, dim G <= n, or all.
struct Scope {
    ScopeKind kind = ScopeKind::Full;
    SubspaceId F;
    int n = 0;

    static Scope single(SubspaceId F) { return {ScopeKind::Single, F, 0}; }
    static Scope level(int n) { return {ScopeKind::Level, SubspaceId(), n}; }
    static Scope full() { return {ScopeKind::Full, SubspaceId(), 0}; }

    bool includes(SubspaceId G) const
    {
        switch (kind) {
        case ScopeKind::Single: return G.subset_of(F);
        case ScopeKind::Level: return G.dim() <= n;
        case ScopeKind::Full: return true;
        }
        return false;
    }
};

struct PolyBody {
    const SliceAtlas* atlas = nullptr;
    const AtlasIndex* index = nullptr;
    Scope scope;
};

// Largest sign <psi, y> - (1 - delta) over in-scope slices, or -inf when none can be positive.
double max_violation(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y);

// Closed linear tests of the scope, without the ball test.
bool linear_tests_pass(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y,
                       double tol = kLinearTol);

bool body_membership(const PolyBody& body, const Point& y, double tol = kLinearTol);
bool body_membership(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y,
                     double tol = kLinearTol);

// Some in-scope open slice contains y (linear test only).
bool in_union_of_slices(const SliceAtlas& atlas, const AtlasIndex& index, const Scope& scope, const Point& y);

double mu_p_eval(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x);

struct HalfSpaceRep {
    SubspaceId F;
    std::vector<Functional> a;  // restricted to span F, full length d
    std::vector<double> rhs;
};

HalfSpaceRep restricted_halfspaces(const SliceAtlas& atlas, SubspaceId F);

struct VertexReport {
    std::size_t constraints = 0;
    std::size_t vertices = 0;
    double max_vertex_norm = 0.0;
    std::vector<Point> points;
};

VertexReport enumerate_vertices(const SliceAtlas& atlas, SubspaceId F);

CheckEntry verify_polyhedral_restriction(const SliceAtlas& atlas, const AtlasIndex& index, SubspaceId F, int k,
                                         std::uint64_t seed);

struct LfcWitness {
    SubspaceId F;
    double radius = 0.0;
    std::vector<Functional> functionals;
};

LfcWitness lfc_witness(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x);

// Counts y in the witness ball where P-membership and the witness test disagree.
std::size_t lfc_violations(const SliceAtlas& atlas, const AtlasIndex& index, const Point& x, const LfcWitness& w, int k,
                           std::uint64_t seed);

}  // namespace renorm
