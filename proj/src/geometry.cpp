#include "inferxpath/geometry.hpp"

#include <algorithm>

namespace ixp {

bool box_contained_in(const BoundingBox& inner, const BoundingBox& outer, double eps) {
    return outer.x0 - eps <= inner.x0 && inner.x1 <= outer.x1 + eps &&
           outer.y0 - eps <= inner.y0 && inner.y1 <= outer.y1 + eps;
}

bool box_overlaps(const BoundingBox& a, const BoundingBox& b, double eps) {
    double ix = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    double iy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    return ix > eps && iy > eps;
}

bool box_right_of(const BoundingBox& from, const BoundingBox& b, double eps) {
    return b.x0 >= from.x1 - eps;
}

bool box_left_of(const BoundingBox& from, const BoundingBox& b, double eps) {
    return b.x1 <= from.x0 + eps;
}

bool box_above(const BoundingBox& from, const BoundingBox& b, double eps) {
    return b.y1 <= from.y0 + eps;
}

bool box_below(const BoundingBox& from, const BoundingBox& b, double eps) {
    return b.y0 >= from.y1 - eps;
}

GeometryIndex::GeometryIndex(std::vector<std::pair<std::uint32_t, BoundingBox>> boxes) {
    std::sort(boxes.begin(), boxes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    entries_.reserve(boxes.size());
    for (auto& [node, box] : boxes)
        entries_.push_back(Entry{node, box});

    auto ids = [this] {
        std::vector<std::uint32_t> v(entries_.size());
        for (std::uint32_t i = 0; i < v.size(); ++i)
            v[i] = i;
        return v;
    };
    by_x0_ = ids();
    by_x1_ = ids();
    by_y0_ = ids();
    by_y1_ = ids();
    auto by = [this](auto key) {
        return [this, key](std::uint32_t a, std::uint32_t b) {
            return key(entries_[a].box) < key(entries_[b].box);
        };
    };
    std::sort(by_x0_.begin(), by_x0_.end(), by([](const BoundingBox& b) { return b.x0; }));
    std::sort(by_x1_.begin(), by_x1_.end(), by([](const BoundingBox& b) { return b.x1; }));
    std::sort(by_y0_.begin(), by_y0_.end(), by([](const BoundingBox& b) { return b.y0; }));
    std::sort(by_y1_.begin(), by_y1_.end(), by([](const BoundingBox& b) { return b.y1; }));

    // max-x1 segment tree in by_x0_ order
    std::size_t n = entries_.size();
    max_x1_tree_.assign(n ? 4 * n : 0, 0);
    if (n) {
        auto build = [&](auto&& self, std::size_t t, std::size_t lo, std::size_t hi) -> double {
            if (lo + 1 == hi)
                return max_x1_tree_[t] = entries_[by_x0_[lo]].box.x1;
            std::size_t mid = (lo + hi) / 2;
            double l = self(self, 2 * t + 1, lo, mid);
            double r = self(self, 2 * t + 2, mid, hi);
            return max_x1_tree_[t] = std::max(l, r);
        };
        build(build, 0, 0, n);
    }
}

const BoundingBox* GeometryIndex::box(std::uint32_t node) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), node,
                               [](const Entry& e, std::uint32_t n) { return e.node < n; });
    if (it == entries_.end() || it->node != node)
        return nullptr;
    return &it->box;
}

void GeometryIndex::collect(std::size_t t, std::size_t lo, std::size_t hi, double qlo,
                            double qhi, std::vector<std::uint32_t>& out) const {
    if (lo >= hi || max_x1_tree_[t] < qlo)
        return;
    if (lo + 1 == hi) {
        std::uint32_t e = by_x0_[lo];
        if (entries_[e].box.x0 <= qhi && entries_[e].box.x1 >= qlo)
            out.push_back(e);
        return;
    }
    std::size_t mid = (lo + hi) / 2;
    collect(t * 2 + 1, lo, mid, qlo, qhi, out);
    // prune the right half entirely once x0 exceeds the query end
    if (entries_[by_x0_[mid]].box.x0 <= qhi)
        collect(t * 2 + 2, mid, hi, qlo, qhi, out);
}

std::vector<std::uint32_t> GeometryIndex::x_intersecting(double lo, double hi) const {
    std::vector<std::uint32_t> out;
    if (!entries_.empty())
        collect(0, 0, entries_.size(), lo, hi, out);
    return out;
}

namespace {

std::vector<std::uint32_t> finish(std::vector<std::uint32_t> nodes) {
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

} // namespace

std::vector<std::uint32_t> GeometryIndex::contained_in(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    // any container within tolerance intersects the widened x-interval
    for (std::uint32_t e : x_intersecting(from->x0 - eps, from->x1 + eps)) {
        const Entry& cand = entries_[e];
        if (cand.node != node && box_contained_in(*from, cand.box, eps))
            out.push_back(cand.node);
    }
    return finish(std::move(out));
}

std::vector<std::uint32_t> GeometryIndex::overlapping(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    for (std::uint32_t e : x_intersecting(from->x0, from->x1)) {
        const Entry& cand = entries_[e];
        if (cand.node != node && box_overlaps(*from, cand.box, eps))
            out.push_back(cand.node);
    }
    return finish(std::move(out));
}

std::vector<std::uint32_t> GeometryIndex::right_of(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    // suffix of the x0-sorted order: b.x0 >= from.x1 - eps
    auto it = std::lower_bound(by_x0_.begin(), by_x0_.end(), from->x1 - eps,
                               [this](std::uint32_t e, double v) {
                                   return entries_[e].box.x0 < v;
                               });
    for (; it != by_x0_.end(); ++it)
        if (entries_[*it].node != node)
            out.push_back(entries_[*it].node);
    return finish(std::move(out));
}

std::vector<std::uint32_t> GeometryIndex::left_of(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    // prefix of the x1-sorted order: b.x1 <= from.x0 + eps
    auto it = std::upper_bound(by_x1_.begin(), by_x1_.end(), from->x0 + eps,
                               [this](double v, std::uint32_t e) {
                                   return v < entries_[e].box.x1;
                               });
    for (auto j = by_x1_.begin(); j != it; ++j)
        if (entries_[*j].node != node)
            out.push_back(entries_[*j].node);
    return finish(std::move(out));
}

std::vector<std::uint32_t> GeometryIndex::above(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    auto it = std::upper_bound(by_y1_.begin(), by_y1_.end(), from->y0 + eps,
                               [this](double v, std::uint32_t e) {
                                   return v < entries_[e].box.y1;
                               });
    for (auto j = by_y1_.begin(); j != it; ++j)
        if (entries_[*j].node != node)
            out.push_back(entries_[*j].node);
    return finish(std::move(out));
}

std::vector<std::uint32_t> GeometryIndex::below(std::uint32_t node, double eps) const {
    const BoundingBox* from = box(node);
    std::vector<std::uint32_t> out;
    if (!from)
        return out;
    auto it = std::lower_bound(by_y0_.begin(), by_y0_.end(), from->y1 - eps,
                               [this](std::uint32_t e, double v) {
                                   return entries_[e].box.y0 < v;
                               });
    for (; it != by_y0_.end(); ++it)
        if (entries_[*it].node != node)
            out.push_back(entries_[*it].node);
    return finish(std::move(out));
}

} // namespace ixp
