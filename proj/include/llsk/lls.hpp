#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "llsk/bigint.hpp"
#include "llsk/dual_graph.hpp"
#include "llsk/errors.hpp"
#include "llsk/schubert.hpp"

// Eisenbud-Harris limit linear series on compact-type trees whose
// positive-genus components are elliptic tails: compatibility and
// refinedness of vanishing sequences, enumeration of refined series with
// their Schubert multiplicities, Galois-invariant counting, and the
// closed-form real counts.

namespace llsk {

// Orders of vanishing a_0 < a_1 < ... < a_r, with 0 <= a_0 and a_r <= d.
class VanishingSequence {
public:
    VanishingSequence(int r, int d, std::vector<int> a) : r_(r), d_(d), a_(std::move(a)) {
        if (r < 0 || d < 0) throw input_error("invariant", "", "need r, d >= 0");
        if (static_cast<int>(a_.size()) != r + 1)
            throw input_error("invariant", "", "vanishing sequence must have r+1 entries");
        if (a_.front() < 0 || a_.back() > d)
            throw input_error("invariant", "", "vanishing sequence out of [0, d]");
        for (std::size_t i = 1; i < a_.size(); ++i)
            if (a_[i] <= a_[i - 1])
                throw input_error("invariant", "", "vanishing sequence not strictly increasing");
    }

    int r() const { return r_; }
    int d() const { return d_; }
    const std::vector<int>& values() const { return a_; }
    int at(int j) const { return a_[j]; }

    bool operator==(const VanishingSequence& o) const {
        return r_ == o.r_ && d_ == o.d_ && a_ == o.a_;
    }
    bool operator<(const VanishingSequence& o) const {
        return std::tie(r_, d_, a_) < std::tie(o.r_, o.d_, o.a_);
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (i) os << ',';
            os << a_[i];
        }
        os << ')';
        return os.str();
    }

private:
    int r_, d_;
    std::vector<int> a_;
};

// Dictionary between vanishing sequences and Schubert conditions:
// lambda_j = a_{r-j} - (r-j), a partition in the (r+1) x (d-r) box.
inline Partition vanishing_to_partition(const VanishingSequence& a) {
    const int r = a.r(), d = a.d();
    std::vector<int> parts;
    for (int j = 0; j <= r; ++j) parts.push_back(a.at(r - j) - (r - j));
    return Partition(r + 1, d - r, std::move(parts));
}

inline VanishingSequence partition_to_vanishing(const Partition& p, int r, int d) {
    if (p.rows() != r + 1 || p.cols() != d - r)
        throw input_error("invariant", "", "partition from a different box");
    std::vector<int> a(r + 1);
    for (int j = 0; j <= r; ++j) a[r - j] = p.part(j) + (r - j);
    return VanishingSequence(r, d, std::move(a));
}

// The node inequality a_j + a'_{r-j} >= d for all j.
inline bool check_compatibility(const VanishingSequence& a, const VanishingSequence& b) {
    if (a.r() != b.r() || a.d() != b.d())
        throw input_error("input", "", "sequences have mismatched r or d");
    for (int j = 0; j <= a.r(); ++j)
        if (a.at(j) + b.at(a.r() - j) < a.d()) return false;
    return true;
}

// The complementary sequence a'_j = d - a_{r-j}; pairing a with it makes
// every node inequality an equality.
inline VanishingSequence complement_sequence(const VanishingSequence& a) {
    std::vector<int> b(a.r() + 1);
    for (int j = 0; j <= a.r(); ++j) b[j] = a.d() - a.at(a.r() - j);
    return VanishingSequence(a.r(), a.d(), std::move(b));
}

// The forced vanishing sequence at the node of an elliptic tail:
// d-r-1, d-r, ..., d-2, d.
inline VanishingSequence elliptic_tail_sequence(int r, int d) {
    std::vector<int> a;
    for (int i = 0; i < r; ++i) a.push_back(d - r - 1 + i);
    a.push_back(d);
    return VanishingSequence(r, d, std::move(a));
}

// One combinatorial stratum of limit series: a vanishing sequence for
// every (edge, incident vertex) pair plus the Schubert multiplicity of
// each vertex's conditions.
struct LimitSeriesType {
    int r = 0, d = 0;
    std::map<std::pair<std::string, std::string>, VanishingSequence> sequences;
    std::map<std::string, BigInt> vertex_multiplicity;

    const VanishingSequence& at(const std::string& edge, const std::string& vertex) const {
        auto it = sequences.find({edge, vertex});
        if (it == sequences.end())
            throw input_error("schema", "",
                              "no sequence at edge '" + edge + "', vertex '" + vertex + "'");
        return it->second;
    }

    BigInt multiplicity() const {
        BigInt m = 1;
        for (const auto& [v, mult] : vertex_multiplicity) m *= mult;
        return m;
    }

    bool operator==(const LimitSeriesType& o) const {
        return r == o.r && d == o.d && sequences == o.sequences;
    }
    bool operator<(const LimitSeriesType& o) const {
        return std::tie(r, d, sequences) < std::tie(o.r, o.d, o.sequences);
    }
};

inline bool is_compatible(const DualGraph& g, const LimitSeriesType& t) {
    for (const auto& e : g.edges())
        if (!check_compatibility(t.at(e.id, e.ends[0]), t.at(e.id, e.ends[1]))) return false;
    return true;
}

// Refined: equality at every edge and every index.
inline bool is_refined(const DualGraph& g, const LimitSeriesType& t) {
    for (const auto& e : g.edges()) {
        const auto& a = t.at(e.id, e.ends[0]);
        const auto& b = t.at(e.id, e.ends[1]);
        if (a.r() != b.r() || a.d() != b.d())
            throw input_error("input", "", "sequences have mismatched r or d");
        for (int j = 0; j <= a.r(); ++j)
            if (a.at(j) + b.at(a.r() - j) != a.d()) return false;
    }
    return true;
}

// rho minus the total slack of the node inequalities.
inline long long expected_dimension(const DualGraph& g, const LimitSeriesType& t, long long genus) {
    long long slack = 0;
    for (const auto& e : g.edges()) {
        const auto& a = t.at(e.id, e.ends[0]);
        const auto& b = t.at(e.id, e.ends[1]);
        for (int j = 0; j <= a.r(); ++j) slack += a.at(j) + b.at(a.r() - j) - a.d();
    }
    return brill_noether_rho(genus, t.r, t.d) - slack;
}

// Extra Schubert conditions imposed at chosen (rational) vertices, e.g.
// ramification at marked points in general position.
using ExtraConditions = std::map<std::string, std::vector<Partition>>;

struct Enumeration {
    int r = 0, d = 0;
    int genus = 0;
    bool general_position = true; // assumption recorded, not verified
    std::vector<LimitSeriesType> types;

    BigInt total() const {
        BigInt n = 0;
        for (const auto& t : types) n += t.multiplicity();
        return n;
    }
};

namespace detail {

struct TreeShape {
    std::vector<std::string> rational;                // genus-0 vertex ids
    std::vector<std::string> tails;                   // genus-1 leaf ids
    std::vector<const Edge*> interior;                // rational-rational edges
    std::vector<const Edge*> tail_edges;              // rational-tail edges
    const Edge* tail_tail = nullptr;                  // only in the 2-vertex tail case
};

inline TreeShape classify_tree(const DualGraph& g, int r, int d) {
    ensure_tree(g);
    if (r < 0 || d < 1 || r > d) throw input_error("input", "", "need 0 <= r <= d and d >= 1");
    TreeShape shape;
    for (const auto& v : g.vertices()) {
        if (v.genus == 0) {
            shape.rational.push_back(v.id);
        } else if (v.genus == 1) {
            if (g.degree(v.id) != 1)
                throw domain_error(
                    "unsupported configuration: genus-1 vertex '" + v.id +
                    "' is not a leaf; only elliptic tails attached at one node are supported");
            shape.tails.push_back(v.id);
        } else {
            throw domain_error("unsupported configuration: vertex '" + v.id + "' has genus " +
                               std::to_string(v.genus) +
                               "; only genus-0 components and genus-1 tails are supported");
        }
    }
    auto genus_of = [&](const std::string& id) { return g.vertex(id).genus; };
    for (const auto& e : g.edges()) {
        int g0 = genus_of(e.ends[0]), g1 = genus_of(e.ends[1]);
        if (g0 == 0 && g1 == 0) shape.interior.push_back(&e);
        else if (g0 == 1 && g1 == 1) shape.tail_tail = &e;
        else shape.tail_edges.push_back(&e);
    }
    return shape;
}

// The public entry points insist on rho = 0. With extra imposed
// conditions the dimension bookkeeping is carried by the conditions
// themselves: unbalanced inputs simply produce zero counts.
inline void check_rho_zero(const DualGraph& g, int r, int d, const ExtraConditions& extra) {
    long long genus = total_genus(g);
    for (const auto& [v, conds] : extra)
        if (g.vertex(v).genus != 0)
            throw domain_error("extra conditions allowed on genus-0 vertices only");
    if (extra.empty() && brill_noether_rho(genus, r, d) != 0)
        throw domain_error("expected dimension rho(" + std::to_string(genus) + "," +
                           std::to_string(r) + "," + std::to_string(d) + ") = " +
                           std::to_string(brill_noether_rho(genus, r, d)) +
                           " is nonzero; only finite counts are supported");
}

} // namespace detail

// All refined limit series strata: tails carry the forced sequence at
// their node, each interior edge carries a complementary pair of
// sequences indexed by a box partition, and each rational vertex
// contributes the Schubert number of its conditions. Strata of
// multiplicity 0 are omitted. Interior-edge partitions are iterated in
// lexicographic order and the output is canonically sorted.
inline Enumeration enumerate_refined(const DualGraph& g, int r, int d,
                                     const ExtraConditions& extra = {},
                                     bool general_position = true) {
    auto shape = detail::classify_tree(g, r, d);
    detail::check_rho_zero(g, r, d, extra);
    for (const auto& [v, conds] : extra) {
        g.vertex(v);
        for (const auto& p : conds)
            if (p.rows() != r + 1 || p.cols() != d - r)
                throw input_error("invariant", "", "extra condition from a different box");
    }

    Enumeration out;
    out.r = r;
    out.d = d;
    out.genus = total_genus(g);
    out.general_position = general_position;

    // Two elliptic tails joined at one node: both sequences are forced.
    if (shape.tail_tail) {
        if (g.vertices().size() != 2) // larger graphs would have a non-leaf tail
            throw domain_error("unsupported configuration");
        if (d - r - 1 < 0) return out;
        VanishingSequence t = elliptic_tail_sequence(r, d);
        LimitSeriesType type;
        type.r = r;
        type.d = d;
        type.sequences.emplace(std::make_pair(shape.tail_tail->id, shape.tail_tail->ends[0]), t);
        type.sequences.emplace(std::make_pair(shape.tail_tail->id, shape.tail_tail->ends[1]), t);
        for (const auto& v : shape.tails) type.vertex_multiplicity[v] = 1;
        if (is_refined(g, type)) out.types.push_back(std::move(type));
        return out;
    }

    if (!shape.tails.empty() && d - r - 1 < 0) return out; // forced tail sequence impossible

    const auto box = all_partitions_in_box(r + 1, d - r);
    const Partition tail_condition =
        shape.tails.empty() ? Partition(r + 1, d - r)
                            : vanishing_to_partition(complement_sequence(elliptic_tail_sequence(r, d)));

    // Odometer over interior-edge partition labels; the label is the
    // partition of the sequence on the side of the smaller endpoint id.
    std::vector<std::size_t> idx(shape.interior.size(), 0);
    auto vertex_conditions = [&](const std::string& v) {
        std::vector<Partition> conds;
        for (std::size_t k = 0; k < shape.interior.size(); ++k) {
            const Edge* e = shape.interior[k];
            if (e->ends[0] != v && e->ends[1] != v) continue;
            const std::string low = std::min(e->ends[0], e->ends[1]);
            conds.push_back(v == low ? box[idx[k]] : box[idx[k]].complement());
        }
        for (const Edge* e : shape.tail_edges)
            if (e->ends[0] == v || e->ends[1] == v) conds.push_back(tail_condition);
        if (auto it = extra.find(v); it != extra.end())
            conds.insert(conds.end(), it->second.begin(), it->second.end());
        return conds;
    };

    while (true) {
        std::map<std::string, BigInt> mults;
        bool nonzero = true;
        for (const auto& v : shape.rational) {
            BigInt n = intersection_number(vertex_conditions(v), r, d);
            if (n == 0) {
                nonzero = false;
                break;
            }
            mults[v] = n;
        }
        if (nonzero) {
            LimitSeriesType type;
            type.r = r;
            type.d = d;
            type.vertex_multiplicity = mults;
            for (const auto& v : shape.tails) type.vertex_multiplicity[v] = 1;
            for (std::size_t k = 0; k < shape.interior.size(); ++k) {
                const Edge* e = shape.interior[k];
                const std::string low = std::min(e->ends[0], e->ends[1]);
                const std::string high = std::max(e->ends[0], e->ends[1]);
                VanishingSequence a = partition_to_vanishing(box[idx[k]], r, d);
                type.sequences.emplace(std::make_pair(e->id, low), a);
                type.sequences.emplace(std::make_pair(e->id, high), complement_sequence(a));
            }
            if (!shape.tail_edges.empty()) {
                VanishingSequence t = elliptic_tail_sequence(r, d);
                for (const Edge* e : shape.tail_edges) {
                    bool tail_first = g.vertex(e->ends[0]).genus == 1;
                    const std::string tail = tail_first ? e->ends[0] : e->ends[1];
                    const std::string rational = tail_first ? e->ends[1] : e->ends[0];
                    type.sequences.emplace(std::make_pair(e->id, tail), t);
                    type.sequences.emplace(std::make_pair(e->id, rational),
                                           complement_sequence(t));
                }
            }
            out.types.push_back(std::move(type));
        }
        // advance the odometer
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
            if (++idx[k] < box.size()) break;
            idx[k] = 0;
        }
        if (k == idx.size()) break;
    }
    std::sort(out.types.begin(), out.types.end());
    return out;
}

// Total number of refined series counted with multiplicities, computed by
// passing Schubert classes along the tree from the leaves inward rather
// than materializing the strata. For a subtree hanging off an edge, the
// coefficient of sigma_mu in its class is the weighted number of subtree
// assignments whose sequence toward the parent pairs with condition mu.
inline BigInt count_refined(const DualGraph& g, int r, int d, const ExtraConditions& extra = {}) {
    auto shape = detail::classify_tree(g, r, d);
    detail::check_rho_zero(g, r, d, extra);

    if (shape.tail_tail || shape.rational.empty() ||
        (!shape.tails.empty() && d - r - 1 < 0)) {
        // No rational vertex to recurse from; fall back to the direct
        // enumeration of the (at most one) forced stratum.
        return enumerate_refined(g, r, d, extra).total();
    }

    const int rows = r + 1, cols = d - r;
    const Partition tail_condition =
        shape.tails.empty() ? Partition(rows, cols)
                            : vanishing_to_partition(complement_sequence(elliptic_tail_sequence(r, d)));

    // Root at the lexicographically smallest rational vertex of maximal degree.
    std::string root = shape.rational.front();
    for (const auto& v : shape.rational)
        if (std::make_pair(-g.degree(v), v) < std::make_pair(-g.degree(root), root)) root = v;

    auto subtree_class = [&](auto&& self, const std::string& v,
                             const std::string& parent_edge) -> ClassCombination {
        // Class accumulated at a rational vertex from its tails, its
        // extra conditions, and its rational children. The class passed
        // upward equals the accumulated class: pairing against the
        // parent condition is the box duality coefficient lookup.
        ClassCombination acc = ClassCombination::unit(rows, cols);
        for (const auto& eid : g.incident_edges(v)) {
            if (eid == parent_edge) continue;
            const std::string w = g.other_end(eid, v);
            if (g.vertex(w).genus == 1) acc = multiply(acc, tail_condition);
            else {
                ClassCombination child = self(self, w, eid);
                ClassCombination next(rows, cols);
                for (const auto& [mu, c] : child.terms()) {
                    ClassCombination prod = multiply(acc, mu);
                    for (const auto& [nu, pc] : prod.terms()) next.add(nu, c * pc);
                }
                acc = next;
            }
        }
        if (auto it = extra.find(v); it != extra.end())
            for (const auto& p : it->second) acc = multiply(acc, p);
        return acc;
    };

    ClassCombination total = subtree_class(subtree_class, root, "");
    Partition full(rows, cols, std::vector<int>(rows, cols));
    return total.coefficient(full);
}

// Transport of a stratum along a graph automorphism: the sequence at the
// image pair equals the original sequence.
inline LimitSeriesType transport(const DualGraph& g, const LimitSeriesType& t,
                                 const GraphAutomorphism& a) {
    auto rep = validate_automorphism(g, a);
    if (!rep) throw domain_error("not an automorphism: " + rep.message);
    LimitSeriesType out;
    out.r = t.r;
    out.d = t.d;
    for (const auto& [key, seq] : t.sequences)
        out.sequences.emplace(std::make_pair(a.edge_map.at(key.first), a.vertex_map.at(key.second)),
                              seq);
    for (const auto& [v, m] : t.vertex_multiplicity) out.vertex_multiplicity[a.vertex_map.at(v)] = m;
    return out;
}

struct GaloisCountReport {
    BigInt invariant_strata = 0;
    std::vector<std::size_t> invariant_indices;
    bool all_multiplicity_one = true;
    // When every invariant stratum is reduced (multiplicity 1), the
    // stratum count is the rational point count; otherwise only the
    // stratum count is asserted.
    std::string note;
};

// Strata fixed by every element of the given automorphism collection.
inline GaloisCountReport galois_invariant_count(const DualGraph& g, const Enumeration& en,
                                                const std::vector<GraphAutomorphism>& group) {
    GaloisCountReport report;
    for (std::size_t i = 0; i < en.types.size(); ++i) {
        bool fixed = true;
        for (const auto& a : group)
            if (!(transport(g, en.types[i], a) == en.types[i])) {
                fixed = false;
                break;
            }
        if (fixed) {
            report.invariant_indices.push_back(i);
            if (en.types[i].multiplicity() != 1) report.all_multiplicity_one = false;
        }
    }
    report.invariant_strata = report.invariant_indices.size();
    report.note = report.all_multiplicity_one
                      ? "every invariant stratum is reduced; strata count equals the "
                        "rational point count under the stated assumptions"
                      : "counts invariant combinatorial strata, not rational points: some "
                        "invariant stratum has multiplicity > 1";
    return report;
}

struct RealCountReport {
    int d = 0;
    BigInt total;              // all complex series
    BigInt cools_coppens;      // real count with all ramification non-real
    BigInt eremenko_gabrielov; // minimal real count; 0 in the odd case
    bool odd_no_real = false;  // odd d: curves with no real series exist
};

// Closed-form counts for r = 1, g = 2d-2.
inline RealCountReport real_count_formulas(int d) {
    if (d < 2) throw input_error("input", "", "need d >= 2");
    RealCountReport rep;
    rep.d = d;
    rep.total = binomial(2 * d - 2, d - 1) / d;
    rep.cools_coppens = binomial(d - 1, (d - 1 + 1) / 2);
    if (d % 2 == 0) {
        rep.eremenko_gabrielov = binomial(d - 1, d / 2) / (d - 1);
    } else {
        rep.eremenko_gabrielov = 0;
        rep.odd_no_real = true;
    }
    return rep;
}

struct SmoothFiberPrediction {
    long long n = 0;
    bool finiteness_certified = false;
    bool reducedness_certified = false;
    std::string statement;
    std::vector<std::string> warnings;
};

// Pure reporting: restates the nearby-fiber conclusion for a caller-
// supplied invariant reduced point count. No analysis is performed; the
// hypotheses are recorded as supplied.
inline SmoothFiberPrediction predict_smooth_fiber_count(long long n_invariant_reduced,
                                                        bool finiteness_certified,
                                                        bool reducedness_certified) {
    if (n_invariant_reduced < 0) throw input_error("input", "", "count must be nonnegative");
    SmoothFiberPrediction p;
    p.n = n_invariant_reduced;
    p.finiteness_certified = finiteness_certified;
    p.reducedness_certified = reducedness_certified;
    if (n_invariant_reduced == 0)
        p.statement = "nearby smooth fibers carry no rational linear series";
    else
        p.statement = "nearby smooth fibers carry exactly " +
                      std::to_string(n_invariant_reduced) + " rational linear series";
    if (!finiteness_certified)
        p.warnings.push_back("hypotheses unverified: finiteness of the special-fiber moduli "
                             "was not certified by the caller");
    if (!reducedness_certified)
        p.warnings.push_back("hypotheses unverified: reducedness of the invariant points was "
                             "not certified by the caller");
    return p;
}

} // namespace llsk
