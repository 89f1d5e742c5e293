#ifndef INFERXPATH_GEOMETRY_HPP
#define INFERXPATH_GEOMETRY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "inferxpath/dom.hpp"

namespace ixp {

// Pairwise visual predicates. Screen coordinates: y grows downward, so "up"
// means the candidate box ends above the reference box's top edge. These are
// the single source of truth; the index only accelerates them.
bool box_contained_in(const BoundingBox& inner, const BoundingBox& outer, double eps);
bool box_overlaps(const BoundingBox& a, const BoundingBox& b, double eps);
bool box_right_of(const BoundingBox& from, const BoundingBox& b, double eps);
bool box_left_of(const BoundingBox& from, const BoundingBox& b, double eps);
bool box_above(const BoundingBox& from, const BoundingBox& b, double eps);
bool box_below(const BoundingBox& from, const BoundingBox& b, double eps);

// Static spatial index over one page's annotation boxes. Directional queries
// are binary searches over coordinate-sorted arrays; containment and overlap
// run an x-interval range query and filter candidates with the exact
// predicate. Results come back sorted by node index.
class GeometryIndex {
public:
    explicit GeometryIndex(std::vector<std::pair<std::uint32_t, BoundingBox>> boxes);

    const BoundingBox* box(std::uint32_t node) const;
    std::size_t size() const { return entries_.size(); }

    std::vector<std::uint32_t> contained_in(std::uint32_t node, double eps) const;
    std::vector<std::uint32_t> overlapping(std::uint32_t node, double eps) const;
    std::vector<std::uint32_t> right_of(std::uint32_t node, double eps) const;
    std::vector<std::uint32_t> left_of(std::uint32_t node, double eps) const;
    std::vector<std::uint32_t> above(std::uint32_t node, double eps) const;
    std::vector<std::uint32_t> below(std::uint32_t node, double eps) const;

private:
    struct Entry {
        std::uint32_t node;
        BoundingBox box;
    };

    // Entries whose x-interval [x0, x1] intersects [lo, hi].
    std::vector<std::uint32_t> x_intersecting(double lo, double hi) const;
    void collect(std::size_t tree, std::size_t lo, std::size_t hi, double qlo,
                 double qhi, std::vector<std::uint32_t>& out) const;

    std::vector<Entry> entries_;            // sorted by node index
    std::vector<std::uint32_t> by_x0_, by_x1_, by_y0_, by_y1_; // entry ids
    std::vector<double> max_x1_tree_;       // segment tree over by_x0_ order
};

} // namespace ixp

#endif
