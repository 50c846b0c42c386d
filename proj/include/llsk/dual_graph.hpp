#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "llsk/errors.hpp"

// Dual graphs of totally split compact-type curves: one vertex per
// irreducible component (weighted by its genus), one edge per node.
// Partial smoothings of a family appear as edge contractions.
//
// All values are immutable after construction; every operation is a pure
// function of its inputs.

namespace llsk {

struct Vertex {
    std::string id;
    int genus = 0;
};

struct Edge {
    std::string id;
    std::array<std::string, 2> ends; // unordered
};

struct MarkedPoint {
    std::string vertex;
    std::string label;
};

class DualGraph {
public:
    DualGraph() = default;

    DualGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
              std::vector<MarkedPoint> marks = {})
        : vertices_(std::move(vertices)), edges_(std::move(edges)), marks_(std::move(marks)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const auto& v = vertices_[i];
            if (v.genus < 0)
                throw input_error("invariant", "/vertices/" + v.id, "negative genus");
            if (!vertex_index_.emplace(v.id, i).second)
                throw input_error("invariant", "/vertices/" + v.id, "duplicate vertex id");
        }
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            if (!edge_index_.emplace(e.id, i).second)
                throw input_error("invariant", "/edges/" + e.id, "duplicate edge id");
            for (const auto& end : e.ends)
                if (!vertex_index_.count(end))
                    throw input_error("schema", "/edges/" + e.id,
                                      "endpoint references missing vertex '" + end + "'");
        }
        for (const auto& m : marks_)
            if (!vertex_index_.count(m.vertex))
                throw input_error("schema", "/marks/" + m.label,
                                  "mark references missing vertex '" + m.vertex + "'");
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<MarkedPoint>& marks() const { return marks_; }

    bool has_vertex(const std::string& id) const { return vertex_index_.count(id) != 0; }
    bool has_edge(const std::string& id) const { return edge_index_.count(id) != 0; }

    const Vertex& vertex(const std::string& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end())
            throw input_error("schema", "", "unknown vertex id '" + id + "'");
        return vertices_[it->second];
    }

    const Edge& edge(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end())
            throw input_error("schema", "", "unknown edge id '" + id + "'");
        return edges_[it->second];
    }

    // Edge ids incident to a vertex, in input order. A self-loop appears once.
    std::vector<std::string> incident_edges(const std::string& vertex_id) const {
        std::vector<std::string> out;
        for (const auto& e : edges_)
            if (e.ends[0] == vertex_id || e.ends[1] == vertex_id) out.push_back(e.id);
        return out;
    }

    int degree(const std::string& vertex_id) const {
        int deg = 0;
        for (const auto& e : edges_) {
            if (e.ends[0] == vertex_id) ++deg;
            if (e.ends[1] == vertex_id) ++deg;
        }
        return deg;
    }

    std::string other_end(const std::string& edge_id, const std::string& vertex_id) const {
        const Edge& e = edge(edge_id);
        if (e.ends[0] == vertex_id) return e.ends[1];
        if (e.ends[1] == vertex_id) return e.ends[0];
        throw input_error("schema", "", "vertex '" + vertex_id + "' not on edge '" + edge_id + "'");
    }

    bool operator==(const DualGraph& o) const {
        auto key = [](const DualGraph& g) {
            std::vector<std::pair<std::string, int>> vs;
            for (const auto& v : g.vertices_) vs.emplace_back(v.id, v.genus);
            std::sort(vs.begin(), vs.end());
            std::vector<std::pair<std::string, std::set<std::string>>> es;
            for (const auto& e : g.edges_)
                es.emplace_back(e.id, std::set<std::string>{e.ends[0], e.ends[1]});
            std::sort(es.begin(), es.end());
            std::vector<std::pair<std::string, std::string>> ms;
            for (const auto& m : g.marks_) ms.emplace_back(m.vertex, m.label);
            std::sort(ms.begin(), ms.end());
            return std::make_tuple(vs, es, ms);
        };
        return key(*this) == key(o);
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<MarkedPoint> marks_;
    std::map<std::string, std::size_t> vertex_index_;
    std::map<std::string, std::size_t> edge_index_;
};

namespace detail {

// Union-find over vertex ids, kept independent of the BFS-based checks so
// connectivity is certified two ways.
class UnionFind {
public:
    void add(const std::string& x) { parent_.emplace(x, x); }
    std::string find(const std::string& x) {
        auto it = parent_.find(x);
        if (it->second == x) return x;
        std::string root = find(it->second);
        parent_[x] = root;
        return root;
    }
    // Returns false if already joined.
    bool unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent_[ra] = rb;
        return true;
    }

private:
    std::map<std::string, std::string> parent_;
};

} // namespace detail

// True iff the graph is connected and acyclic, i.e. every node of the
// curve is disconnecting. The diagnostic names the offending cycle edge
// or a pair of disconnected vertices.
inline ValidationReport validate_compact_type(const DualGraph& g) {
    if (g.vertices().empty()) return ValidationReport::fail("empty graph: no vertices");
    detail::UnionFind uf;
    for (const auto& v : g.vertices()) uf.add(v.id);
    for (const auto& e : g.edges()) {
        if (e.ends[0] == e.ends[1])
            return ValidationReport::fail("cycle: edge '" + e.id + "' is a loop at vertex '" +
                                          e.ends[0] + "'");
        if (!uf.unite(e.ends[0], e.ends[1]))
            return ValidationReport::fail("cycle: edge '" + e.id +
                                          "' joins already-connected vertices '" + e.ends[0] +
                                          "' and '" + e.ends[1] + "'");
    }
    const std::string root = uf.find(g.vertices().front().id);
    for (const auto& v : g.vertices())
        if (uf.find(v.id) != root)
            return ValidationReport::fail("disconnected: no path between '" +
                                          g.vertices().front().id + "' and '" + v.id + "'");
    if (g.edges().size() + 1 != g.vertices().size())
        return ValidationReport::fail("edge count " + std::to_string(g.edges().size()) +
                                      " != vertex count - 1");
    return ValidationReport::pass();
}

inline void ensure_tree(const DualGraph& g) {
    auto r = validate_compact_type(g);
    if (!r) throw domain_error("not a compact-type dual graph: " + r.message);
}

// Arithmetic genus of the curve: the dual graph is a tree, so it is the
// sum of the component genera.
inline int total_genus(const DualGraph& g) {
    ensure_tree(g);
    int sum = 0;
    for (const auto& v : g.vertices()) sum += v.genus;
    return sum;
}

// The two sides of a node: vertex sets of the components after removing
// the edge. The side containing the smaller incident vertex id comes
// first; this order is the canonical one used by multidegrees.
inline std::pair<std::set<std::string>, std::set<std::string>>
split_at_edge(const DualGraph& g, const std::string& edge_id) {
    ensure_tree(g);
    const Edge& e = g.edge(edge_id);
    auto reach = [&](const std::string& start) {
        std::set<std::string> seen{start};
        std::vector<std::string> queue{start};
        while (!queue.empty()) {
            std::string v = queue.back();
            queue.pop_back();
            for (const auto& ee : g.edges()) {
                if (ee.id == edge_id) continue;
                std::string next;
                if (ee.ends[0] == v) next = ee.ends[1];
                else if (ee.ends[1] == v) next = ee.ends[0];
                else continue;
                if (seen.insert(next).second) queue.push_back(next);
            }
        }
        return seen;
    };
    const std::string first = std::min(e.ends[0], e.ends[1]);
    const std::string second = std::max(e.ends[0], e.ends[1]);
    return {reach(first), reach(second)};
}

struct ContractionResult {
    DualGraph graph;
    // total-graph vertex id -> merged vertex id
    std::map<std::string, std::string> vertex_image;
};

// Contract a set of edges (smooth the corresponding nodes). Merged
// vertices take the lexicographically smallest constituent id and the sum
// of the constituent genera; marks transfer.
inline ContractionResult contract_edges(const DualGraph& g, const std::set<std::string>& edge_ids) {
    for (const auto& id : edge_ids) g.edge(id); // existence check
    detail::UnionFind uf;
    for (const auto& v : g.vertices()) uf.add(v.id);
    for (const auto& id : edge_ids) {
        const Edge& e = g.edge(id);
        uf.unite(e.ends[0], e.ends[1]);
    }
    // Representative = smallest id in the merged class.
    std::map<std::string, std::string> rep;
    for (const auto& v : g.vertices()) {
        std::string root = uf.find(v.id);
        auto it = rep.find(root);
        if (it == rep.end() || v.id < it->second) rep[root] = v.id;
    }
    std::map<std::string, std::string> image;
    std::map<std::string, int> genus;
    for (const auto& v : g.vertices()) {
        image[v.id] = rep[uf.find(v.id)];
        genus[image[v.id]] += v.genus;
    }
    std::vector<Vertex> vertices;
    for (const auto& [id, gen] : genus) vertices.push_back({id, gen});
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (!edge_ids.count(e.id))
            edges.push_back({e.id, {image.at(e.ends[0]), image.at(e.ends[1])}});
    std::vector<MarkedPoint> marks;
    for (const auto& m : g.marks()) marks.push_back({image.at(m.vertex), m.label});
    return {DualGraph(std::move(vertices), std::move(edges), std::move(marks)), std::move(image)};
}

inline DualGraph contract_edge(const DualGraph& g, const std::string& edge_id) {
    return contract_edges(g, {edge_id}).graph;
}

struct GraphAutomorphism {
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::string> edge_map;
};

// An automorphism must permute vertices and edges, preserve incidence and
// genus weights, and preserve the set of marked points (labels fixed).
inline ValidationReport validate_automorphism(const DualGraph& g, const GraphAutomorphism& a) {
    std::set<std::string> vimg, eimg;
    for (const auto& v : g.vertices()) {
        auto it = a.vertex_map.find(v.id);
        if (it == a.vertex_map.end())
            return ValidationReport::fail("vertex '" + v.id + "' has no image");
        if (!g.has_vertex(it->second))
            return ValidationReport::fail("vertex image '" + it->second + "' not in graph");
        if (!vimg.insert(it->second).second)
            return ValidationReport::fail("vertex map not injective at '" + it->second + "'");
        if (g.vertex(it->second).genus != v.genus)
            return ValidationReport::fail("genus not preserved at vertex '" + v.id + "'");
    }
    for (const auto& e : g.edges()) {
        auto it = a.edge_map.find(e.id);
        if (it == a.edge_map.end())
            return ValidationReport::fail("edge '" + e.id + "' has no image");
        if (!g.has_edge(it->second))
            return ValidationReport::fail("edge image '" + it->second + "' not in graph");
        if (!eimg.insert(it->second).second)
            return ValidationReport::fail("edge map not injective at '" + it->second + "'");
        const Edge& img = g.edge(it->second);
        std::set<std::string> want{a.vertex_map.at(e.ends[0]), a.vertex_map.at(e.ends[1])};
        std::set<std::string> have{img.ends[0], img.ends[1]};
        if (want != have)
            return ValidationReport::fail("incidence not preserved at edge '" + e.id + "'");
    }
    std::multiset<std::pair<std::string, std::string>> before, after;
    for (const auto& m : g.marks()) {
        before.emplace(m.vertex, m.label);
        after.emplace(a.vertex_map.at(m.vertex), m.label);
    }
    if (before != after)
        return ValidationReport::fail("marked points not preserved");
    return ValidationReport::pass();
}

// The relabeled graph. Composing with the inverse automorphism gives back
// the identity relabeling.
inline DualGraph apply_automorphism(const DualGraph& g, const GraphAutomorphism& a) {
    auto r = validate_automorphism(g, a);
    if (!r) throw domain_error("not an automorphism: " + r.message);
    std::vector<Vertex> vertices;
    for (const auto& v : g.vertices()) vertices.push_back({a.vertex_map.at(v.id), v.genus});
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        edges.push_back({a.edge_map.at(e.id),
                         {a.vertex_map.at(e.ends[0]), a.vertex_map.at(e.ends[1])}});
    std::vector<MarkedPoint> marks;
    for (const auto& m : g.marks()) marks.push_back({a.vertex_map.at(m.vertex), m.label});
    return DualGraph(std::move(vertices), std::move(edges), std::move(marks));
}

// Finite combinatorial stand-in for a base scheme: one label per fiber
// type, each listing the edges that stay nodal there (the rest are
// smoothed away by contraction).
struct GraphFamily {
    struct Fiber {
        std::string base;
        std::set<std::string> nodal_edges;
    };
    DualGraph total;
    std::vector<Fiber> fibers;
};

inline ValidationReport validate_family(const GraphFamily& fam) {
    auto r = validate_compact_type(fam.total);
    if (!r) return ValidationReport::fail("total graph: " + r.message);
    if (fam.fibers.empty()) return ValidationReport::fail("family has no base points");
    std::set<std::string> bases;
    for (const auto& f : fam.fibers) {
        if (!bases.insert(f.base).second)
            return ValidationReport::fail("duplicate base point '" + f.base + "'");
        for (const auto& e : f.nodal_edges)
            if (!fam.total.has_edge(e))
                return ValidationReport::fail("fiber '" + f.base + "' names unknown edge '" + e +
                                              "'");
    }
    return ValidationReport::pass();
}

// Whether some fiber keeps every edge nodal. Not required of a family: a
// base can degenerate at independent points with no common central fiber.
inline bool has_central_fiber(const GraphFamily& fam) {
    for (const auto& f : fam.fibers)
        if (f.nodal_edges.size() == fam.total.edges().size()) return true;
    return false;
}

inline const GraphFamily::Fiber& family_fiber(const GraphFamily& fam, const std::string& base) {
    for (const auto& f : fam.fibers)
        if (f.base == base) return f;
    throw input_error("schema", "", "unknown base point '" + base + "'");
}

// The dual graph of the fiber at a base point: contract every edge that
// does not stay nodal there.
inline ContractionResult fiber_graph(const GraphFamily& fam, const std::string& base) {
    const auto& fib = family_fiber(fam, base);
    std::set<std::string> contracted;
    for (const auto& e : fam.total.edges())
        if (!fib.nodal_edges.count(e.id)) contracted.insert(e.id);
    return contract_edges(fam.total, contracted);
}

} // namespace llsk
