#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "llsk/dual_graph.hpp"
#include "llsk/errors.hpp"

// Multidegree calculus on dual trees: a multidegree distributes the total
// degree d over the two sides of every node, inducing per-component
// degrees on each fiber. Twists move one unit of degree across a node.

namespace llsk {

// One of the two halves a node splits the curve into.
struct Side {
    std::string edge;
    std::set<std::string> half; // vertex ids
};

inline Side canonical_side(const DualGraph& g, const std::string& edge_id) {
    auto [first, second] = split_at_edge(g, edge_id);
    return {edge_id, std::move(first)};
}

// complement is an involution carrying the same edge id
inline Side complement_side(const DualGraph& g, const Side& s) {
    auto [first, second] = split_at_edge(g, s.edge);
    if (s.half == first) return {s.edge, std::move(second)};
    if (s.half == second) return {s.edge, std::move(first)};
    throw input_error("schema", "", "half does not match a side of edge '" + s.edge + "'");
}

struct SideValue {
    std::string edge;
    std::set<std::string> half;
    long long value = 0;
};

// Stored on the canonical side of each edge only; the complementary value
// is derived, so md(Y) + md(Y^c) = d holds by construction. A multidegree
// is always complete for the graph it was built against.
class Multidegree {
public:
    Multidegree() = default;
    Multidegree(int d, std::map<std::string, long long> canonical_values)
        : d_(d), canon_(std::move(canonical_values)) {
        if (d_ <= 0) throw input_error("invariant", "/d", "total degree must be positive");
    }

    static Multidegree from_sides(const DualGraph& g, int d, const std::vector<SideValue>& sides) {
        if (d <= 0) throw input_error("invariant", "/d", "total degree must be positive");
        std::map<std::string, long long> canon;
        for (const auto& sv : sides) {
            auto [first, second] = split_at_edge(g, sv.edge);
            long long canonical_value;
            if (sv.half == first) canonical_value = sv.value;
            else if (sv.half == second) canonical_value = d - sv.value;
            else
                throw input_error("schema", "/sides/" + sv.edge,
                                  "half does not match a side of the edge");
            auto [it, inserted] = canon.emplace(sv.edge, canonical_value);
            if (!inserted && it->second != canonical_value)
                throw input_error("invariant", "/sides/" + sv.edge,
                                  "side values violate md(Y) + md(Y^c) = d");
        }
        for (const auto& e : g.edges())
            if (!canon.count(e.id))
                throw input_error("schema", "/sides",
                                  "edge '" + e.id + "' omitted; omitted sides are an error");
        return Multidegree(d, std::move(canon));
    }

    int degree() const { return d_; }
    const std::map<std::string, long long>& canonical_values() const { return canon_; }

    bool defined_on(const std::string& edge_id) const { return canon_.count(edge_id) != 0; }

    long long canonical_value(const std::string& edge_id) const {
        auto it = canon_.find(edge_id);
        if (it == canon_.end())
            throw input_error("schema", "", "multidegree missing edge '" + edge_id + "'");
        return it->second;
    }

    long long value_on(const DualGraph& g, const Side& s) const {
        auto [first, second] = split_at_edge(g, s.edge);
        long long c = canonical_value(s.edge);
        if (s.half == first) return c;
        if (s.half == second) return d_ - c;
        throw input_error("schema", "", "half does not match a side of edge '" + s.edge + "'");
    }

    bool operator==(const Multidegree& o) const { return d_ == o.d_ && canon_ == o.canon_; }
    bool operator<(const Multidegree& o) const {
        return std::tie(d_, canon_) < std::tie(o.d_, o.canon_);
    }

private:
    int d_ = 1;
    std::map<std::string, long long> canon_;
};

using FiberDegrees = std::map<std::string, long long>;

namespace detail {

inline void ensure_matching_edges(const DualGraph& g, const Multidegree& md) {
    for (const auto& e : g.edges())
        if (!md.defined_on(e.id))
            throw input_error("schema", "", "multidegree missing edge '" + e.id + "'");
    if (md.canonical_values().size() != g.edges().size())
        throw input_error("schema", "", "multidegree names edges not in the graph");
}

} // namespace detail

// Per-component degrees of the fully nodal fiber: each vertex gets
// d minus the degrees assigned to the far side of its incident nodes.
// This is the unique assignment summing to md(Y) within every side Y.
inline FiberDegrees fiber_multidegree(const DualGraph& g, const Multidegree& md) {
    ensure_tree(g);
    detail::ensure_matching_edges(g, md);
    const long long d = md.degree();
    FiberDegrees out;
    for (const auto& v : g.vertices()) {
        long long val = d;
        for (const auto& eid : g.incident_edges(v.id)) {
            auto [first, second] = split_at_edge(g, eid);
            long long away = first.count(v.id) ? d - md.canonical_value(eid)
                                               : md.canonical_value(eid);
            val -= away;
        }
        out[v.id] = val;
    }
    return out;
}

// Subtract 1 from the given side and add 1 to its complement.
inline Multidegree twist(const DualGraph& g, const Multidegree& md, const Side& side) {
    auto [first, second] = split_at_edge(g, side.edge);
    auto canon = md.canonical_values();
    long long& v = canon.at(side.edge);
    if (side.half == first) v -= 1;
    else if (side.half == second) v += 1;
    else throw input_error("schema", "", "half does not match a side of edge '" + side.edge + "'");
    return Multidegree(md.degree(), std::move(canon));
}

inline bool is_concentrated(const DualGraph& g, const Multidegree& md,
                            const std::string& vertex_id) {
    g.vertex(vertex_id); // existence check
    for (const auto& [v, deg] : fiber_multidegree(g, md))
        if (v != vertex_id && deg != 0) return false;
    return true;
}

// Which vertex, if any, carries the full degree.
inline std::optional<std::string> concentration_vertex(const DualGraph& g, const Multidegree& md) {
    for (const auto& v : g.vertices())
        if (is_concentrated(g, md, v.id)) return v.id;
    return std::nullopt;
}

struct PulledBackMultidegree {
    DualGraph graph; // the fiber graph
    Multidegree md;
    std::map<std::string, std::string> vertex_image;
};

// Restriction of a multidegree to the fiber at a base point: only the
// edges persisting there survive, with sides re-read in the contracted
// graph. Total degree is unchanged.
inline PulledBackMultidegree pullback_multidegree(const GraphFamily& fam, const Multidegree& md,
                                                  const std::string& base) {
    detail::ensure_matching_edges(fam.total, md);
    auto contracted = fiber_graph(fam, base);
    std::map<std::string, long long> canon;
    for (const auto& e : contracted.graph.edges()) {
        // The canonical side downstairs is the image of one of the two
        // sides upstairs; match by membership of an image endpoint.
        auto [first_down, second_down] = split_at_edge(contracted.graph, e.id);
        auto [first_up, second_up] = split_at_edge(fam.total, e.id);
        const std::string up_rep = *first_up.begin();
        bool canonical_matches = first_down.count(contracted.vertex_image.at(up_rep)) != 0;
        canon[e.id] =
            canonical_matches ? md.canonical_value(e.id) : md.degree() - md.canonical_value(e.id);
    }
    Multidegree pulled(md.degree(), std::move(canon));
    return {std::move(contracted.graph), std::move(pulled), std::move(contracted.vertex_image)};
}

inline bool is_uniformly_concentrated(const GraphFamily& fam, const Multidegree& md) {
    for (const auto& f : fam.fibers) {
        auto pulled = pullback_multidegree(fam, md, f.base);
        if (!concentration_vertex(pulled.graph, pulled.md)) return false;
    }
    return true;
}

// All uniformly concentrated multidegrees of the family. Any such
// multidegree assigns 0 or d to every side of an edge that is nodal in
// some fiber, so the search space is the 2^|E| sign patterns.
inline std::vector<Multidegree> enumerate_uniformly_concentrated(const GraphFamily& fam, int d) {
    auto rep = validate_family(fam);
    if (!rep) throw input_error("invariant", "", rep.message);
    if (d <= 0) throw input_error("invariant", "/d", "total degree must be positive");
    std::set<std::string> ever_nodal;
    for (const auto& f : fam.fibers)
        for (const auto& e : f.nodal_edges) ever_nodal.insert(e);
    for (const auto& e : fam.total.edges())
        if (!ever_nodal.count(e.id))
            throw domain_error("edge '" + e.id +
                               "' is nodal in no fiber; uniformly concentrated multidegrees are "
                               "not finite in number");
    std::vector<std::string> edge_ids;
    for (const auto& e : fam.total.edges()) edge_ids.push_back(e.id);
    const std::size_t n = edge_ids.size();
    if (n > 20) throw domain_error("family has too many edges to enumerate multidegrees");
    std::vector<Multidegree> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::map<std::string, long long> canon;
        for (std::size_t i = 0; i < n; ++i)
            canon[edge_ids[i]] = (mask >> i & 1) ? d : 0;
        Multidegree md(d, std::move(canon));
        if (is_uniformly_concentrated(fam, md)) out.push_back(std::move(md));
    }
    std::sort(out.begin(), out.end()); // lexicographic side order
    return out;
}

struct SufficiencyResult {
    bool ok = false;
    std::vector<Multidegree> collection;
    // witness of insufficiency when !ok
    std::string witness_base;
    std::string witness_vertex;
};

// Greedy set cover over the uniformly concentrated candidates: every
// component of every fiber must be hit by a member concentrated on it.
// Ties are broken by lexicographic side order; the result is one minimal
// choice, not a canonical one.
inline SufficiencyResult find_sufficient_collection(const GraphFamily& fam, int d) {
    auto candidates = enumerate_uniformly_concentrated(fam, d);

    using Target = std::pair<std::string, std::string>; // (base, fiber vertex)
    std::set<Target> universe;
    for (const auto& f : fam.fibers) {
        auto fib = fiber_graph(fam, f.base);
        for (const auto& v : fib.graph.vertices()) universe.emplace(f.base, v.id);
    }
    std::vector<std::set<Target>> covers(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (const auto& f : fam.fibers) {
            auto pulled = pullback_multidegree(fam, candidates[i], f.base);
            if (auto v = concentration_vertex(pulled.graph, pulled.md))
                covers[i].emplace(f.base, *v);
        }

    std::set<Target> covered;
    SufficiencyResult result;
    while (covered.size() < universe.size()) {
        std::size_t best = candidates.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            std::size_t gain = 0;
            for (const auto& t : covers[i])
                if (!covered.count(t)) ++gain;
            if (gain > best_gain) { // lexicographically first candidate wins ties
                best_gain = gain;
                best = i;
            }
        }
        if (best == candidates.size()) {
            for (const auto& t : universe)
                if (!covered.count(t)) {
                    result.witness_base = t.first;
                    result.witness_vertex = t.second;
                    break;
                }
            result.ok = false;
            result.collection.clear();
            return result;
        }
        covered.insert(covers[best].begin(), covers[best].end());
        result.collection.push_back(candidates[best]);
    }
    result.ok = true;
    return result;
}

} // namespace llsk
