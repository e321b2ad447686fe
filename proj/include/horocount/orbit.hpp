#pragma once

// Breadth-first expansion of horoball orbits under a generator set, pruned
// by diameter and clipped to a region.

#include "horocount/preset.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace horo {

struct OrbitRequest {
    std::vector<MoebiusMap> generators;
    /// Seeds must be tangent at infinity.
    std::vector<Horoball> seeds;
    Rational min_diameter;
    Window region;
    std::uint64_t max_nodes = 10'000'000;
    /// Nodes are kept while their tangent lies in the region inflated by
    /// `inflation` times their own diameter.
    Rational inflation = 1;
};

struct OrbitEntry {
    Horoball horoball;
    /// BFS level (number of non-parabolic letters); -1 when not produced by a walk.
    int word_length = -1;
};

struct HoroballSet {
    int dim = 1;
    /// Sorted by tangent, one entry per tangent.
    std::vector<OrbitEntry> entries;
    bool truncated = false;
    std::uint64_t nodes_visited = 0;

    std::size_t count() const { return entries.size(); }
    Rational min_diameter() const;
    Rational max_diameter() const;
    std::vector<Horoball> horoballs() const;
};

/// Throws InvalidArgument for non-positive min_diameter, finite seeds, or a
/// stabilizer of infinity containing non-translations.
HoroballSet expand_orbit(const OrbitRequest& req);

/// Closed form {(p/q, 1/|q|^2)}: finite tangents in the region with diameter >= min_diameter.
HoroballSet ford_reference(const GroupPreset& group, const Window& region, const Rational& min_diameter);

/// Exact test: interiors of two horoballs are disjoint.
bool interiors_disjoint(const Horoball& a, const Horoball& b);

/// CSV with columns tangent_num, tangent_den (re/im pairs for d=2), diameter_num, diameter_den, word_length.
void write_orbit_csv(std::ostream& out, const HoroballSet& set);

}  // namespace horo
