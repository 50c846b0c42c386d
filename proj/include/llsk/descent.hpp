#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "llsk/errors.hpp"

// Finite sites and finite-set-valued sheaves: a desk-scale model of
// descent. Restriction to a suitable full subcategory is an equivalence,
// with a quasi-inverse computed by covering limits; compatible families
// of sheaves over slice categories glue; Galois descent data cut out
// fixed points.
//
// Finite limits are realized as subsets of products, colimits as
// quotients of disjoint unions. Fiber products are declared data whose
// universal property is verified against all declared arrows.

namespace llsk {

struct SiteArrow {
    std::string id, src, dst;
};

struct SiteCovering {
    std::string target;
    std::vector<std::string> by; // arrow ids with dst == target
};

struct FiberProductDecl {
    std::string left, right;           // arrow ids with a common target
    std::string object;                // the declared product object
    std::string proj_left, proj_right; // object -> src(left), object -> src(right)
};

class FiniteSite {
public:
    FiniteSite() = default;
    FiniteSite(std::vector<std::string> objects, std::vector<SiteArrow> arrows,
               std::map<std::string, std::string> identities,
               std::map<std::pair<std::string, std::string>, std::string> compose,
               std::vector<SiteCovering> coverings, std::vector<FiberProductDecl> fiber_products)
        : objects_(std::move(objects)), identities_(std::move(identities)),
          compose_(std::move(compose)), coverings_(std::move(coverings)),
          fiber_products_(std::move(fiber_products)) {
        for (auto& a : arrows)
            if (!arrows_.emplace(a.id, a).second)
                throw input_error("invariant", "/arrows/" + a.id, "duplicate arrow id");
        // id o f = f and f o id = f are implied; fill them in.
        for (const auto& [id, a] : arrows_) {
            auto it_src = identities_.find(a.src);
            auto it_dst = identities_.find(a.dst);
            if (it_src != identities_.end()) compose_.emplace(std::make_pair(id, it_src->second), id);
            if (it_dst != identities_.end()) compose_.emplace(std::make_pair(it_dst->second, id), id);
        }
    }

    const std::vector<std::string>& objects() const { return objects_; }
    const std::map<std::string, SiteArrow>& arrows() const { return arrows_; }
    const std::vector<SiteCovering>& coverings() const { return coverings_; }
    const std::vector<FiberProductDecl>& fiber_products() const { return fiber_products_; }

    bool has_object(const std::string& o) const {
        return std::find(objects_.begin(), objects_.end(), o) != objects_.end();
    }

    const SiteArrow& arrow(const std::string& id) const {
        auto it = arrows_.find(id);
        if (it == arrows_.end()) throw input_error("schema", "", "unknown arrow '" + id + "'");
        return it->second;
    }

    const std::string& identity(const std::string& obj) const {
        auto it = identities_.find(obj);
        if (it == identities_.end())
            throw input_error("schema", "", "no identity declared for object '" + obj + "'");
        return it->second;
    }

    // g o f, for f: a -> b and g: b -> c.
    const std::string& compose(const std::string& g, const std::string& f) const {
        auto it = compose_.find({g, f});
        if (it == compose_.end())
            throw input_error("schema", "",
                              "composite '" + g + "' o '" + f + "' not in the composition table");
        return it->second;
    }

    std::vector<std::string> arrows_between(const std::string& src, const std::string& dst) const {
        std::vector<std::string> out;
        for (const auto& [id, a] : arrows_)
            if (a.src == src && a.dst == dst) out.push_back(id);
        return out;
    }

    std::vector<std::string> arrows_into(const std::string& dst) const {
        std::vector<std::string> out;
        for (const auto& [id, a] : arrows_)
            if (a.dst == dst) out.push_back(id);
        return out;
    }

    // (object, proj onto src(f), proj onto src(g)) for the declared
    // product of the cospan (f, g); declarations are symmetric.
    std::optional<FiberProductDecl> fiber_product(const std::string& f,
                                                  const std::string& g) const {
        for (const auto& fp : fiber_products_) {
            if (fp.left == f && fp.right == g) return fp;
            if (fp.left == g && fp.right == f)
                return FiberProductDecl{f, g, fp.object, fp.proj_right, fp.proj_left};
        }
        return std::nullopt;
    }

    bool is_isomorphic(const std::string& a, const std::string& b) const {
        if (a == b) return true;
        for (const auto& f : arrows_between(a, b))
            for (const auto& g : arrows_between(b, a))
                if (compose(g, f) == identity(a) && compose(f, g) == identity(b)) return true;
        return false;
    }

    // (f: a -> b, g: b -> a) with both composites the identity.
    std::optional<std::pair<std::string, std::string>> find_iso(const std::string& a,
                                                                const std::string& b) const {
        for (const auto& f : arrows_between(a, b))
            for (const auto& g : arrows_between(b, a))
                if (compose(g, f) == identity(a) && compose(f, g) == identity(b))
                    return std::make_pair(f, g);
        return std::nullopt;
    }

    ValidationReport validate() const {
        if (objects_.empty()) return ValidationReport::fail("site has no objects");
        {
            std::set<std::string> seen(objects_.begin(), objects_.end());
            if (seen.size() != objects_.size())
                return ValidationReport::fail("duplicate object id");
        }
        for (const auto& [id, a] : arrows_) {
            if (!has_object(a.src) || !has_object(a.dst))
                return ValidationReport::fail("arrow '" + id + "' references unknown object");
        }
        for (const auto& o : objects_) {
            auto it = identities_.find(o);
            if (it == identities_.end())
                return ValidationReport::fail("object '" + o + "' has no identity arrow");
            const SiteArrow& ida = arrow(it->second);
            if (ida.src != o || ida.dst != o)
                return ValidationReport::fail("identity of '" + o + "' is not an endomorphism");
        }
        // Totality and typing of composition.
        for (const auto& [gid, g] : arrows_)
            for (const auto& [fid, f] : arrows_) {
                if (f.dst != g.src) {
                    if (compose_.count({gid, fid}))
                        return ValidationReport::fail("composite declared for non-composable '" +
                                                      gid + "' o '" + fid + "'");
                    continue;
                }
                auto it = compose_.find({gid, fid});
                if (it == compose_.end())
                    return ValidationReport::fail("missing composite '" + gid + "' o '" + fid +
                                                  "'");
                const SiteArrow& gf = arrow(it->second);
                if (gf.src != f.src || gf.dst != g.dst)
                    return ValidationReport::fail("composite '" + gid + "' o '" + fid +
                                                  "' has wrong endpoints");
            }
        // Identity laws.
        for (const auto& [id, a] : arrows_) {
            if (compose(id, identity(a.src)) != id || compose(identity(a.dst), id) != id)
                return ValidationReport::fail("identity law fails at arrow '" + id + "'");
        }
        // Associativity.
        for (const auto& [hid, h] : arrows_)
            for (const auto& [gid, g] : arrows_) {
                if (g.dst != h.src) continue;
                for (const auto& [fid, f] : arrows_) {
                    if (f.dst != g.src) continue;
                    if (compose(hid, compose(gid, fid)) != compose(compose(hid, gid), fid))
                        return ValidationReport::fail("associativity fails at '" + hid + "' o '" +
                                                      gid + "' o '" + fid + "'");
                }
            }
        // Coverings.
        for (const auto& cov : coverings_) {
            if (!has_object(cov.target))
                return ValidationReport::fail("covering of unknown object '" + cov.target + "'");
            for (const auto& m : cov.by)
                if (arrow(m).dst != cov.target)
                    return ValidationReport::fail("covering member '" + m +
                                                  "' does not map to '" + cov.target + "'");
            for (std::size_t i = 0; i < cov.by.size(); ++i)
                for (std::size_t j = i; j < cov.by.size(); ++j)
                    if (!fiber_product(cov.by[i], cov.by[j]))
                        return ValidationReport::fail("covering of '" + cov.target +
                                                      "' lacks the fiber product of '" +
                                                      cov.by[i] + "' and '" + cov.by[j] + "'");
        }
        // Declared fiber products: typing, commuting square, universal property.
        for (const auto& fp : fiber_products_) {
            const SiteArrow& l = arrow(fp.left);
            const SiteArrow& r = arrow(fp.right);
            if (l.dst != r.dst)
                return ValidationReport::fail("fiber product of arrows without a common target");
            const SiteArrow& pl = arrow(fp.proj_left);
            const SiteArrow& pr = arrow(fp.proj_right);
            if (pl.src != fp.object || pr.src != fp.object || pl.dst != l.src || pr.dst != r.src)
                return ValidationReport::fail("fiber product projections mistyped for ('" +
                                              fp.left + "','" + fp.right + "')");
            if (compose(fp.left, fp.proj_left) != compose(fp.right, fp.proj_right))
                return ValidationReport::fail("fiber product square for ('" + fp.left + "','" +
                                              fp.right + "') does not commute");
            for (const auto& o : objects_)
                for (const auto& f : arrows_between(o, l.src))
                    for (const auto& g : arrows_between(o, r.src)) {
                        if (compose(fp.left, f) != compose(fp.right, g)) continue;
                        int mediating = 0;
                        for (const auto& h : arrows_between(o, fp.object))
                            if (compose(fp.proj_left, h) == f && compose(fp.proj_right, h) == g)
                                ++mediating;
                        if (mediating != 1)
                            return ValidationReport::fail(
                                "universal property fails for fiber product ('" + fp.left +
                                "','" + fp.right + "') against the cone from '" + o + "'");
                    }
        }
        return ValidationReport::pass();
    }

private:
    std::vector<std::string> objects_;
    std::map<std::string, SiteArrow> arrows_;
    std::map<std::string, std::string> identities_;
    std::map<std::pair<std::string, std::string>, std::string> compose_;
    std::vector<SiteCovering> coverings_;
    std::vector<FiberProductDecl> fiber_products_;
};

// Finite-set-valued presheaf: a set per object, a function F(dst) ->
// F(src) per arrow.
class SetSheaf {
public:
    SetSheaf() = default;

    void set_value(const std::string& obj, std::vector<std::string> elements) {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        sets_[obj] = std::move(elements);
    }

    void set_map(const std::string& arrow_id, std::map<std::string, std::string> m) {
        maps_[arrow_id] = std::move(m);
    }

    bool has_value(const std::string& obj) const { return sets_.count(obj) != 0; }

    const std::vector<std::string>& at(const std::string& obj) const {
        auto it = sets_.find(obj);
        if (it == sets_.end())
            throw input_error("schema", "", "presheaf has no value at object '" + obj + "'");
        return it->second;
    }

    const std::string& apply(const std::string& arrow_id, const std::string& element) const {
        auto it = maps_.find(arrow_id);
        if (it == maps_.end())
            throw input_error("schema", "", "presheaf has no map for arrow '" + arrow_id + "'");
        auto jt = it->second.find(element);
        if (jt == it->second.end())
            throw input_error("schema", "", "presheaf map for arrow '" + arrow_id +
                                                "' undefined on element '" + element + "'");
        return jt->second;
    }

    const std::map<std::string, std::vector<std::string>>& values() const { return sets_; }
    const std::map<std::string, std::map<std::string, std::string>>& maps() const { return maps_; }

    // Contravariant functoriality over the given site.
    ValidationReport check_functorial(const FiniteSite& site) const {
        for (const auto& o : site.objects())
            if (!sets_.count(o))
                return ValidationReport::fail("no value at object '" + o + "'");
        for (const auto& [id, a] : site.arrows()) {
            auto it = maps_.find(id);
            if (it == maps_.end())
                return ValidationReport::fail("no map for arrow '" + id + "'");
            const auto& dom = at(a.dst);
            if (it->second.size() != dom.size())
                return ValidationReport::fail("map for arrow '" + id +
                                              "' not defined on exactly F(dst)");
            const auto& cod = at(a.src);
            for (const auto& x : dom) {
                auto jt = it->second.find(x);
                if (jt == it->second.end())
                    return ValidationReport::fail("map for arrow '" + id +
                                                  "' undefined on element '" + x + "'");
                if (std::find(cod.begin(), cod.end(), jt->second) == cod.end())
                    return ValidationReport::fail("map for arrow '" + id +
                                                  "' leaves F(src) at element '" + x + "'");
            }
        }
        for (const auto& o : site.objects())
            for (const auto& x : at(o))
                if (apply(site.identity(o), x) != x)
                    return ValidationReport::fail("identity arrow of '" + o +
                                                  "' does not act as identity");
        for (const auto& [gid, g] : site.arrows())
            for (const auto& [fid, f] : site.arrows()) {
                if (f.dst != g.src) continue;
                const std::string& gf = site.compose(gid, fid);
                for (const auto& x : at(g.dst))
                    if (apply(gf, x) != apply(fid, apply(gid, x)))
                        return ValidationReport::fail("functoriality fails at '" + gid + "' o '" +
                                                      fid + "'");
            }
        return ValidationReport::pass();
    }
};

namespace detail {

// Tuples (x_i) over a covering that agree on every declared overlap.
inline std::vector<std::vector<std::string>>
compatible_tuples(const FiniteSite& site, const SiteCovering& cov,
                  const std::function<const std::vector<std::string>&(const std::string&)>& value,
                  const std::function<std::string(const std::string&, const std::string&)>& apply) {
    const std::size_t n = cov.by.size();
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> tuple(n);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            out.push_back(tuple);
            return;
        }
        for (const auto& x : value(site.arrow(cov.by[i]).src)) {
            tuple[i] = x;
            // check only the pairs ending at i
            bool ok = true;
            for (std::size_t k = 0; k <= i && ok; ++k) {
                auto fp = site.fiber_product(cov.by[k], cov.by[i]);
                if (!fp)
                    throw input_error("schema", "",
                                      "missing fiber product for covering of '" + cov.target +
                                          "'");
                ok = apply(fp->proj_left, tuple[k]) == apply(fp->proj_right, tuple[i]);
            }
            if (ok) self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace detail

struct SheafCheckResult {
    bool ok = false;
    bool functorial = false;
    std::string message; // failing covering / section witness when !ok
};

// The sheaf axiom over every declared covering: sections over the target
// correspond exactly to compatible tuples over the members.
inline SheafCheckResult check_sheaf(const FiniteSite& site, const SetSheaf& F) {
    SheafCheckResult result;
    auto fun = F.check_functorial(site);
    if (!fun) {
        result.message = "not functorial: " + fun.message;
        return result;
    }
    result.functorial = true;
    for (const auto& cov : site.coverings()) {
        auto tuples = detail::compatible_tuples(
            site, cov, [&](const std::string& o) -> const std::vector<std::string>& { return F.at(o); },
            [&](const std::string& a, const std::string& x) { return F.apply(a, x); });
        std::map<std::vector<std::string>, int> hits;
        for (const auto& t : tuples) hits[t] = 0;
        for (const auto& s : F.at(cov.target)) {
            std::vector<std::string> img;
            for (const auto& m : cov.by) img.push_back(F.apply(m, s));
            auto it = hits.find(img);
            if (it == hits.end()) {
                result.message = "restriction of section '" + s + "' over '" + cov.target +
                                 "' is not a compatible tuple";
                return result;
            }
            if (++it->second > 1) {
                result.message = "two sections over '" + cov.target +
                                 "' share the restriction tuple of '" + s + "'";
                return result;
            }
        }
        for (const auto& [t, count] : hits)
            if (count == 0) {
                std::ostringstream os;
                os << "compatible tuple (";
                for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
                os << ") over '" << cov.target << "' has no glued section";
                result.message = os.str();
                return result;
            }
    }
    result.ok = true;
    return result;
}

struct FactorableResult {
    bool ok = false;
    std::string witness; // object with no factorable covering when !ok
};

inline bool maps_into(const FiniteSite& site, const std::string& t,
                      const std::set<std::string>& targets) {
    for (const auto& [id, a] : site.arrows())
        if (a.src == t && targets.count(a.dst)) return true;
    return false;
}

// Every object needs a covering whose members' sources admit arrows into
// the collection; the identity covering serves when the object itself does.
inline FactorableResult check_factorable(const FiniteSite& site, const std::set<std::string>& pi) {
    for (const auto& p : pi)
        if (!site.has_object(p)) throw input_error("schema", "", "unknown object '" + p + "'");
    for (const auto& t : site.objects()) {
        bool covered = maps_into(site, t, pi);
        if (!covered)
            for (const auto& cov : site.coverings()) {
                if (cov.target != t) continue;
                bool all = true;
                for (const auto& m : cov.by)
                    if (!maps_into(site, site.arrow(m).src, pi)) {
                        all = false;
                        break;
                    }
                if (all) {
                    covered = true;
                    break;
                }
            }
        if (!covered) return {false, t};
    }
    return {true, ""};
}

// Objects admitting an arrow into the collection: the factorable
// subcategory.
inline std::set<std::string> factorable_subcategory(const FiniteSite& site,
                                                    const std::set<std::string>& pi) {
    std::set<std::string> out;
    for (const auto& t : site.objects())
        if (maps_into(site, t, pi)) out.insert(t);
    return out;
}

// The two hypotheses under which restriction to a full subcategory is an
// equivalence: (1) every object is covered by subcategory objects, and
// (2) an object maps into the subcategory iff it is isomorphic to a
// member.
inline ValidationReport check_restriction_hypotheses(const FiniteSite& site,
                                                     const std::set<std::string>& sub) {
    for (const auto& s : sub)
        if (!site.has_object(s)) throw input_error("schema", "", "unknown object '" + s + "'");
    for (const auto& t : site.objects()) {
        bool covered = sub.count(t) != 0; // identity covering
        if (!covered)
            for (const auto& cov : site.coverings()) {
                if (cov.target != t) continue;
                bool all = true;
                for (const auto& m : cov.by)
                    if (!sub.count(site.arrow(m).src)) {
                        all = false;
                        break;
                    }
                if (all) {
                    covered = true;
                    break;
                }
            }
        if (!covered)
            return ValidationReport::fail("hypothesis 1 fails: object '" + t +
                                          "' has no covering by subcategory objects");
    }
    for (const auto& t : site.objects()) {
        bool has_arrow = maps_into(site, t, sub);
        bool has_iso = false;
        for (const auto& s : sub)
            if (site.is_isomorphic(t, s)) {
                has_iso = true;
                break;
            }
        if (has_arrow != has_iso)
            return ValidationReport::fail(
                "hypothesis 2 fails at object '" + t +
                (has_arrow ? "': it maps into the subcategory but is not isomorphic to a member"
                           : "': it is isomorphic to a member but has no arrow into the "
                             "subcategory"));
    }
    return ValidationReport::pass();
}

// The full subcategory with the induced topology.
inline FiniteSite induced_site(const FiniteSite& site, const std::set<std::string>& sub) {
    std::vector<std::string> objects;
    for (const auto& o : site.objects())
        if (sub.count(o)) objects.push_back(o);
    std::vector<SiteArrow> arrows;
    std::set<std::string> kept;
    for (const auto& [id, a] : site.arrows())
        if (sub.count(a.src) && sub.count(a.dst)) {
            arrows.push_back(a);
            kept.insert(id);
        }
    std::map<std::string, std::string> identities;
    for (const auto& o : objects) identities[o] = site.identity(o);
    std::map<std::pair<std::string, std::string>, std::string> compose;
    for (const auto& g : kept)
        for (const auto& f : kept) {
            if (site.arrow(f).dst != site.arrow(g).src) continue;
            const std::string& gf = site.compose(g, f);
            if (!kept.count(gf))
                throw domain_error("subcategory not closed under composition at '" + g + "' o '" +
                                   f + "'");
            compose[{g, f}] = gf;
        }
    std::vector<SiteCovering> coverings;
    for (const auto& cov : site.coverings()) {
        if (!sub.count(cov.target)) continue;
        bool all = true;
        for (const auto& m : cov.by)
            if (!kept.count(m)) all = false;
        if (all) coverings.push_back(cov);
    }
    std::vector<FiberProductDecl> fps;
    for (const auto& fp : site.fiber_products())
        if (kept.count(fp.left) && kept.count(fp.right) && sub.count(fp.object) &&
            kept.count(fp.proj_left) && kept.count(fp.proj_right))
            fps.push_back(fp);
    return FiniteSite(std::move(objects), std::move(arrows), std::move(identities),
                      std::move(compose), std::move(coverings), std::move(fps));
}

// Restriction of a sheaf to a full subcategory satisfying the two
// hypotheses above.
inline SetSheaf restrict_sheaf(const FiniteSite& site, const std::set<std::string>& sub,
                               const SetSheaf& F) {
    auto hyp = check_restriction_hypotheses(site, sub);
    if (!hyp) throw domain_error("restriction hypotheses fail: " + hyp.message);
    SetSheaf out;
    for (const auto& o : site.objects())
        if (sub.count(o)) out.set_value(o, F.at(o));
    for (const auto& [id, a] : site.arrows())
        if (sub.count(a.src) && sub.count(a.dst)) {
            std::map<std::string, std::string> m;
            for (const auto& x : F.at(a.dst)) m[x] = F.apply(id, x);
            out.set_map(id, std::move(m));
        }
    return out;
}

namespace detail {

// Evaluation of a subcategory sheaf on objects of the ambient site that
// are isomorphic to members: values transport along a chosen isomorphism.
struct SubEvaluator {
    const FiniteSite& site;
    const std::set<std::string>& sub;
    const SetSheaf& F;
    mutable std::map<std::string, std::pair<std::string, std::string>> iso_; // obj -> (rep, arrow rep->obj)

    const std::pair<std::string, std::string>& rep(const std::string& obj) const {
        auto it = iso_.find(obj);
        if (it != iso_.end()) return it->second;
        if (sub.count(obj))
            return iso_.emplace(obj, std::make_pair(obj, site.identity(obj))).first->second;
        for (const auto& s : sub)
            if (auto fg = site.find_iso(s, obj))
                return iso_.emplace(obj, std::make_pair(s, fg->first)).first->second;
        throw domain_error("object '" + obj +
                           "' is not isomorphic to a subcategory member; cannot evaluate");
    }

    const std::vector<std::string>& value(const std::string& obj) const {
        return F.at(rep(obj).first);
    }

    // Restriction along a: p -> s with s in the subcategory and p
    // sub-like: route through the chosen representative of p.
    std::string apply(const std::string& a, const std::string& x) const {
        const SiteArrow& ar = site.arrow(a);
        const auto& [p_rep, to_p] = rep(ar.src);
        const std::string composite = site.compose(a, to_p); // p_rep -> dst(a)
        return F.apply(composite, x);
    }
};

} // namespace detail

// Quasi-inverse of restriction: the value over an outside object is the
// colimit, over its coverings by subcategory objects, of the compatible-
// tuple limits; restriction maps are computed by factoring through the
// coverings. The declared data must be rich enough to find the needed
// factorizations.
inline SetSheaf extend_sheaf(const FiniteSite& site, const std::set<std::string>& sub,
                             const SetSheaf& F_sub) {
    auto hyp = check_restriction_hypotheses(site, sub);
    if (!hyp) throw domain_error("restriction hypotheses fail: " + hyp.message);

    detail::SubEvaluator eval{site, sub, F_sub, {}};

    // Coverings of t whose members all come from the subcategory.
    auto sub_coverings = [&](const std::string& t) {
        std::vector<SiteCovering> out;
        for (const auto& cov : site.coverings()) {
            if (cov.target != t) continue;
            bool all = true;
            for (const auto& m : cov.by)
                if (!sub.count(site.arrow(m).src)) all = false;
            if (all) out.push_back(cov);
        }
        return out;
    };

    struct OutsideValue {
        std::vector<SiteCovering> coverings;
        std::vector<std::vector<std::vector<std::string>>> tuples; // per covering
        // (covering index, tuple index) -> class id
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> cls;
        std::vector<std::pair<std::size_t, std::size_t>> reps; // class -> representative
        std::vector<std::string> names;
    };
    std::map<std::string, OutsideValue> outside;

    auto value_fn = [&](const std::string& o) -> const std::vector<std::string>& {
        return F_sub.at(o);
    };
    auto apply_fn = [&](const std::string& a, const std::string& x) { return eval.apply(a, x); };

    SetSheaf out;
    for (const auto& t : site.objects()) {
        if (sub.count(t)) {
            out.set_value(t, F_sub.at(t));
            continue;
        }
        OutsideValue ov;
        ov.coverings = sub_coverings(t);
        if (ov.coverings.empty())
            throw domain_error("object '" + t + "' has no covering by subcategory objects");
        for (const auto& cov : ov.coverings)
            ov.tuples.push_back(detail::compatible_tuples(site, cov, value_fn, apply_fn));

        // Union-find over all tuples of all coverings.
        std::vector<std::pair<std::size_t, std::size_t>> nodes;
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
        for (std::size_t c = 0; c < ov.tuples.size(); ++c)
            for (std::size_t i = 0; i < ov.tuples[c].size(); ++i) {
                index[{c, i}] = nodes.size();
                nodes.emplace_back(c, i);
            }
        std::vector<std::size_t> parent(nodes.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

        // Identify along every refinement: each member of the finer
        // covering factoring through a member of the coarser one maps
        // limit tuples forward.
        for (std::size_t c1 = 0; c1 < ov.coverings.size(); ++c1)
            for (std::size_t c2 = 0; c2 < ov.coverings.size(); ++c2) {
                const auto& coarse = ov.coverings[c1];
                const auto& fine = ov.coverings[c2];
                // factorization choices per fine member
                std::vector<std::vector<std::pair<std::size_t, std::string>>> choices(
                    fine.by.size());
                bool refines = true;
                for (std::size_t k = 0; k < fine.by.size(); ++k) {
                    const SiteArrow& fk = site.arrow(fine.by[k]);
                    for (std::size_t i = 0; i < coarse.by.size(); ++i) {
                        const SiteArrow& ci = site.arrow(coarse.by[i]);
                        for (const auto& q : site.arrows_between(fk.src, ci.src))
                            if (site.compose(coarse.by[i], q) == fine.by[k])
                                choices[k].emplace_back(i, q);
                    }
                    if (choices[k].empty()) refines = false;
                }
                if (!refines) continue;
                for (std::size_t ti = 0; ti < ov.tuples[c1].size(); ++ti) {
                    const auto& x = ov.tuples[c1][ti];
                    // map along the first factorization choice
                    std::vector<std::string> y(fine.by.size());
                    for (std::size_t k = 0; k < fine.by.size(); ++k) {
                        auto [i, q] = choices[k].front();
                        y[k] = F_sub.apply(q, x[i]);
                    }
                    const auto& fine_tuples = ov.tuples[c2];
                    auto it = std::find(fine_tuples.begin(), fine_tuples.end(), y);
                    if (it == fine_tuples.end())
                        throw domain_error("refinement image of a compatible tuple over '" + t +
                                           "' is not compatible; input is not a sheaf");
                    unite(index[{c1, ti}],
                          index[{c2, static_cast<std::size_t>(it - fine_tuples.begin())}]);
                }
            }

        std::map<std::size_t, std::size_t> root_to_class;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            std::size_t root = find(n);
            if (!root_to_class.count(root)) {
                root_to_class[root] = ov.reps.size();
                ov.reps.push_back(nodes[n]);
            }
            ov.cls[nodes[n]] = root_to_class[root];
        }
        for (std::size_t k = 0; k < ov.reps.size(); ++k)
            ov.names.push_back(t + "#" + std::to_string(k));
        out.set_value(t, ov.names);
        outside[t] = std::move(ov);
    }

    // class of a tuple over an outside object
    auto class_name = [&](const std::string& t, const SiteCovering& cov,
                          const std::vector<std::string>& tuple) -> const std::string& {
        const auto& ov = outside.at(t);
        for (std::size_t c = 0; c < ov.coverings.size(); ++c) {
            if (&ov.coverings[c] != &cov) continue;
            auto it = std::find(ov.tuples[c].begin(), ov.tuples[c].end(), tuple);
            if (it == ov.tuples[c].end()) break;
            return ov.names[ov.cls.at({c, static_cast<std::size_t>(it - ov.tuples[c].begin())})];
        }
        throw domain_error("tuple over '" + t + "' is not a compatible section");
    };

    // Restriction maps.
    for (const auto& [aid, a] : site.arrows()) {
        std::map<std::string, std::string> m;
        const bool t_in = sub.count(a.dst) != 0;
        const bool u_in = sub.count(a.src) != 0;
        if (t_in && u_in) {
            for (const auto& x : F_sub.at(a.dst)) m[x] = F_sub.apply(aid, x);
        } else if (t_in && !u_in) {
            const auto& ov = outside.at(a.src);
            const auto& cov = ov.coverings.front();
            for (const auto& x : F_sub.at(a.dst)) {
                std::vector<std::string> y(cov.by.size());
                for (std::size_t k = 0; k < cov.by.size(); ++k)
                    y[k] = F_sub.apply(site.compose(aid, cov.by[k]), x);
                m[x] = class_name(a.src, cov, y);
            }
        } else {
            // dst outside the subcategory: restrict a representative
            // tuple by factoring through the coverings.
            const auto& ov_t = outside.at(a.dst);
            for (std::size_t cls = 0; cls < ov_t.reps.size(); ++cls) {
                auto [c, ti] = ov_t.reps[cls];
                const auto& cov_t = ov_t.coverings[c];
                const auto& x = ov_t.tuples[c][ti];
                auto factor_through = [&](const std::string& composite_arrow,
                                          const std::string& source_obj)
                    -> std::optional<std::string> {
                    // value of the restricted section on source_obj, where
                    // composite_arrow: source_obj -> a.dst
                    for (std::size_t i = 0; i < cov_t.by.size(); ++i) {
                        const SiteArrow& ci = site.arrow(cov_t.by[i]);
                        for (const auto& q : site.arrows_between(source_obj, ci.src))
                            if (site.compose(cov_t.by[i], q) == composite_arrow)
                                return F_sub.apply(q, x[i]);
                    }
                    return std::nullopt;
                };
                if (u_in) {
                    auto y = factor_through(aid, a.src);
                    if (!y)
                        throw domain_error("cannot factor arrow '" + aid +
                                           "' through the covering of '" + a.dst +
                                           "'; declared data insufficient");
                    m[ov_t.names[cls]] = *y;
                } else {
                    const auto& ov_u = outside.at(a.src);
                    const auto& cov_u = ov_u.coverings.front();
                    std::vector<std::string> y(cov_u.by.size());
                    for (std::size_t k = 0; k < cov_u.by.size(); ++k) {
                        auto yk = factor_through(site.compose(aid, cov_u.by[k]),
                                                 site.arrow(cov_u.by[k]).src);
                        if (!yk)
                            throw domain_error("cannot factor through the covering of '" + a.dst +
                                               "'; declared data insufficient");
                        y[k] = *yk;
                    }
                    m[ov_t.names[cls]] = class_name(a.src, cov_u, y);
                }
            }
        }
        out.set_map(aid, std::move(m));
    }

    auto fun = out.check_functorial(site);
    if (!fun)
        throw domain_error("extension is not functorial (" + fun.message +
                           "); declared site data is insufficient or the input is not a sheaf");
    return out;
}

// Exhaustive natural-isomorphism search: per-object bijections commuting
// with every restriction map. Feasible only because fixtures are tiny.
inline bool naturally_isomorphic(const FiniteSite& site, const SetSheaf& F, const SetSheaf& G) {
    const auto& objs = site.objects();
    for (const auto& o : objs) {
        if (F.at(o).size() != G.at(o).size()) return false;
        if (F.at(o).size() > 8)
            throw domain_error("natural isomorphism search capped at 8 elements per set");
    }
    std::vector<std::string> order(objs.begin(), objs.end());
    std::map<std::string, std::map<std::string, std::string>> phi; // object -> bijection F->G

    std::function<bool(std::size_t)> place = [&](std::size_t oi) -> bool {
        if (oi == order.size()) return true;
        const std::string& o = order[oi];
        const auto& fs = F.at(o);
        std::vector<std::string> gs = G.at(o);
        std::sort(gs.begin(), gs.end());
        do {
            std::map<std::string, std::string> m;
            for (std::size_t i = 0; i < fs.size(); ++i) m[fs[i]] = gs[i];
            phi[o] = m;
            bool ok = true;
            for (const auto& [aid, a] : site.arrows()) {
                if (!phi.count(a.src) || !phi.count(a.dst)) continue;
                for (const auto& x : F.at(a.dst))
                    if (phi[a.src].at(F.apply(aid, x)) != G.apply(aid, phi[a.dst].at(x))) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok && place(oi + 1)) return true;
        } while (std::next_permutation(gs.begin(), gs.end()));
        phi.erase(o);
        return false;
    };
    return place(0);
}

// Hom(-, x): the presheaf represented by an object.
inline SetSheaf representable_presheaf(const FiniteSite& site, const std::string& x) {
    if (!site.has_object(x)) throw input_error("schema", "", "unknown object '" + x + "'");
    SetSheaf F;
    for (const auto& t : site.objects()) F.set_value(t, site.arrows_between(t, x));
    for (const auto& [aid, a] : site.arrows()) {
        std::map<std::string, std::string> m;
        for (const auto& g : site.arrows_between(a.dst, x)) m[g] = site.compose(g, aid);
        F.set_map(aid, std::move(m));
    }
    return F;
}

// A sheaf on the slice category over p: a set per arrow into p, a
// restriction per slice morphism.
struct SliceSheaf {
    std::string p;
    std::map<std::string, std::vector<std::string>> sets; // slice object a: x -> p
    // (b: y -> p, h: x -> y) -> map F(b) -> F(b o h)
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> restrictions;

    const std::vector<std::string>& at(const std::string& a) const {
        auto it = sets.find(a);
        if (it == sets.end())
            throw input_error("schema", "", "slice sheaf has no value at arrow '" + a + "'");
        return it->second;
    }

    const std::string& restrict_along(const std::string& b, const std::string& h,
                                      const std::string& x) const {
        auto it = restrictions.find({b, h});
        if (it == restrictions.end())
            throw input_error("schema", "", "slice sheaf missing restriction of '" + b +
                                                "' along '" + h + "'");
        auto jt = it->second.find(x);
        if (jt == it->second.end())
            throw input_error("schema", "", "slice restriction undefined on element '" + x + "'");
        return jt->second;
    }
};

// Compatible sheaves over the slice categories of the collection, with
// comparison isomorphisms along arrows between collection members.
struct PiSheafDatum {
    std::vector<std::string> pi;
    std::map<std::string, SliceSheaf> sheaves;
    // beta[f][a]: component of the comparison along f: p -> q at the
    // slice object a: x -> p, a bijection F_p(a) -> F_q(f o a).
    std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> betas;

    const std::map<std::string, std::string>& beta(const std::string& f,
                                                   const std::string& a) const {
        auto it = betas.find(f);
        if (it == betas.end())
            throw input_error("schema", "", "datum has no comparison along arrow '" + f + "'");
        auto jt = it->second.find(a);
        if (jt == it->second.end())
            throw input_error("schema", "", "comparison along '" + f +
                                                "' has no component at slice object '" + a + "'");
        return jt->second;
    }
};

namespace detail {

inline ValidationReport check_slice_sheaf(const FiniteSite& site, const SliceSheaf& S) {
    // Values at every slice object, restrictions for every slice
    // morphism, functorial.
    for (const auto& a : site.arrows_into(S.p))
        if (!S.sets.count(a))
            return ValidationReport::fail("no value at slice object '" + a + "'");
    for (const auto& b : site.arrows_into(S.p)) {
        const SiteArrow& barrow = site.arrow(b);
        for (const auto& [hid, h] : site.arrows()) {
            if (h.dst != barrow.src) continue;
            auto it = S.restrictions.find({b, hid});
            if (it == S.restrictions.end())
                return ValidationReport::fail("missing restriction of '" + b + "' along '" + hid +
                                              "'");
            const std::string a = site.compose(b, hid);
            for (const auto& x : S.at(b)) {
                auto jt = it->second.find(x);
                if (jt == it->second.end())
                    return ValidationReport::fail("restriction of '" + b + "' along '" + hid +
                                                  "' undefined on '" + x + "'");
                const auto& target = S.at(a);
                if (std::find(target.begin(), target.end(), jt->second) == target.end())
                    return ValidationReport::fail("restriction of '" + b + "' along '" + hid +
                                                  "' leaves the target set");
            }
            if (hid == site.identity(barrow.src))
                for (const auto& x : S.at(b))
                    if (S.restrict_along(b, hid, x) != x)
                        return ValidationReport::fail("identity slice morphism of '" + b +
                                                      "' does not act as identity");
        }
    }
    // composition of slice morphisms
    for (const auto& b : site.arrows_into(S.p)) {
        const SiteArrow& barrow = site.arrow(b);
        for (const auto& [hid, h] : site.arrows()) {
            if (h.dst != barrow.src) continue;
            const std::string bh = site.compose(b, hid);
            for (const auto& [kid, k] : site.arrows()) {
                if (k.dst != h.src) continue;
                const std::string hk = site.compose(hid, kid);
                for (const auto& x : S.at(b))
                    if (S.restrict_along(b, hk, x) !=
                        S.restrict_along(bh, kid, S.restrict_along(b, hid, x)))
                        return ValidationReport::fail("slice functoriality fails at '" + b +
                                                      "' along '" + hid + "' then '" + kid + "'");
            }
        }
    }
    // sheaf axiom for coverings induced on the slice
    for (const auto& a : site.arrows_into(S.p)) {
        const SiteArrow& aarrow = site.arrow(a);
        for (const auto& cov : site.coverings()) {
            if (cov.target != aarrow.src) continue;
            // members as slice objects
            std::vector<std::string> member_objs;
            for (const auto& m : cov.by) member_objs.push_back(site.compose(a, m));
            // tuples compatible on fiber products
            std::vector<std::vector<std::string>> tuples;
            std::vector<std::string> tuple(cov.by.size());
            auto rec = [&](auto&& self, std::size_t i) -> void {
                if (i == cov.by.size()) {
                    tuples.push_back(tuple);
                    return;
                }
                for (const auto& x : S.at(member_objs[i])) {
                    tuple[i] = x;
                    bool ok = true;
                    for (std::size_t k = 0; k <= i && ok; ++k) {
                        auto fp = site.fiber_product(cov.by[k], cov.by[i]);
                        if (!fp)
                            throw input_error("schema", "", "missing fiber product for covering "
                                                            "of '" +
                                                                cov.target + "'");
                        ok = S.restrict_along(member_objs[k], fp->proj_left, tuple[k]) ==
                             S.restrict_along(member_objs[i], fp->proj_right, tuple[i]);
                    }
                    if (ok) self(self, i + 1);
                }
            };
            rec(rec, 0);
            std::map<std::vector<std::string>, int> hits;
            for (const auto& t : tuples) hits[t] = 0;
            for (const auto& s : S.at(a)) {
                std::vector<std::string> img(cov.by.size());
                for (std::size_t i = 0; i < cov.by.size(); ++i)
                    img[i] = S.restrict_along(a, cov.by[i], s);
                auto it = hits.find(img);
                if (it == hits.end() || ++it->second > 1)
                    return ValidationReport::fail("slice sheaf axiom fails for '" + a +
                                                  "' over the covering of '" + cov.target + "'");
            }
            for (const auto& [t, c] : hits)
                if (c == 0)
                    return ValidationReport::fail("slice sheaf axiom fails for '" + a +
                                                  "' over the covering of '" + cov.target +
                                                  "': unglued tuple");
        }
    }
    return ValidationReport::pass();
}

} // namespace detail

// Validates the comparison data: bijectivity, naturality in the slice,
// identity components, and the cocycle for composable pairs.
inline ValidationReport check_pi_datum(const FiniteSite& site, const PiSheafDatum& datum) {
    std::set<std::string> pi(datum.pi.begin(), datum.pi.end());
    for (const auto& p : pi) {
        if (!site.has_object(p)) return ValidationReport::fail("unknown object '" + p + "'");
        auto it = datum.sheaves.find(p);
        if (it == datum.sheaves.end())
            return ValidationReport::fail("no slice sheaf over '" + p + "'");
        if (it->second.p != p)
            return ValidationReport::fail("slice sheaf over '" + p + "' is labeled '" +
                                          it->second.p + "'");
        auto rep = detail::check_slice_sheaf(site, it->second);
        if (!rep) return ValidationReport::fail("slice sheaf over '" + p + "': " + rep.message);
    }
    // beta components: defined and bijective
    for (const auto& [fid, f] : site.arrows()) {
        if (!pi.count(f.src) || !pi.count(f.dst)) continue;
        const SliceSheaf& Fp = datum.sheaves.at(f.src);
        const SliceSheaf& Fq = datum.sheaves.at(f.dst);
        for (const auto& a : site.arrows_into(f.src)) {
            const auto& comp = datum.beta(fid, a);
            const auto& from = Fp.at(a);
            const auto& to = Fq.at(site.compose(fid, a));
            if (comp.size() != from.size())
                return ValidationReport::fail("comparison along '" + fid + "' at '" + a +
                                              "' not defined on the whole set");
            std::set<std::string> image;
            for (const auto& x : from) {
                auto it = comp.find(x);
                if (it == comp.end())
                    return ValidationReport::fail("comparison along '" + fid + "' at '" + a +
                                                  "' undefined on '" + x + "'");
                if (std::find(to.begin(), to.end(), it->second) == to.end())
                    return ValidationReport::fail("comparison along '" + fid + "' at '" + a +
                                                  "' leaves the target set");
                image.insert(it->second);
            }
            if (image.size() != to.size())
                return ValidationReport::fail("comparison along '" + fid + "' at '" + a +
                                              "' is not bijective");
        }
        // identity components must be identities
        if (fid == site.identity(f.src)) {
            for (const auto& a : site.arrows_into(f.src))
                for (const auto& x : Fp.at(a))
                    if (datum.beta(fid, a).at(x) != x)
                        return ValidationReport::fail("comparison along identity of '" + f.src +
                                                      "' is not the identity");
        }
        // naturality in the slice object
        for (const auto& b : site.arrows_into(f.src)) {
            const SiteArrow& barrow = site.arrow(b);
            for (const auto& [hid, h] : site.arrows()) {
                if (h.dst != barrow.src) continue;
                const std::string bh = site.compose(b, hid);
                const std::string fb = site.compose(fid, b);
                for (const auto& x : Fp.at(b)) {
                    const std::string& lhs = datum.beta(fid, bh).at(Fp.restrict_along(b, hid, x));
                    const std::string& rhs = Fq.restrict_along(fb, hid, datum.beta(fid, b).at(x));
                    if (lhs != rhs)
                        return ValidationReport::fail("comparison along '" + fid +
                                                      "' is not natural at slice object '" + b +
                                                      "' along '" + hid + "'");
                }
            }
        }
    }
    // cocycle over composable pairs
    for (const auto& [fid, f] : site.arrows()) {
        if (!pi.count(f.src) || !pi.count(f.dst)) continue;
        for (const auto& [gid, g] : site.arrows()) {
            if (g.src != f.dst || !pi.count(g.dst)) continue;
            const std::string gf = site.compose(gid, fid);
            const SliceSheaf& Fp = datum.sheaves.at(f.src);
            for (const auto& a : site.arrows_into(f.src)) {
                const std::string fa = site.compose(fid, a);
                for (const auto& x : Fp.at(a)) {
                    const std::string& direct = datum.beta(gf, a).at(x);
                    const std::string& routed = datum.beta(gid, fa).at(datum.beta(fid, a).at(x));
                    if (direct != routed)
                        return ValidationReport::fail("cocycle fails for ('" + fid + "', '" + gid +
                                                      "') at slice object '" + a + "'");
                }
            }
        }
    }
    return ValidationReport::pass();
}

// Glue a compatible family over the collection into a sheaf on the
// factorable subcategory. The value over t is F_p(a) for any arrow
// a: t -> p into the collection; the comparisons make the choice
// immaterial, and the construction verifies that.
inline SetSheaf glue_pi_sheaf(const FiniteSite& site, const PiSheafDatum& datum) {
    std::set<std::string> pi(datum.pi.begin(), datum.pi.end());
    auto fact = check_factorable(site, pi);
    if (!fact.ok)
        throw domain_error("the pair is not factorable: object '" + fact.witness +
                           "' has no factorable covering");
    auto rep = check_pi_datum(site, datum);
    if (!rep) throw domain_error(rep.message);

    const std::set<std::string> spi = factorable_subcategory(site, pi);

    // Nodes of the arrow category over t: pairs (p, a: t -> p).
    struct Glued {
        std::vector<std::pair<std::string, std::string>> nodes; // (p, a)
        std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>>
            to_canonical; // per node: element -> canonical element
        std::string canonical_p, canonical_a;
        std::vector<std::string> elements;
    };
    std::map<std::string, Glued> glued;

    for (const auto& t : spi) {
        Glued gl;
        for (const auto& p : datum.pi)
            for (const auto& a : site.arrows_between(t, p)) gl.nodes.emplace_back(p, a);
        std::sort(gl.nodes.begin(), gl.nodes.end());
        // Union-find over (node, element).
        std::vector<std::pair<std::size_t, std::string>> items;
        std::map<std::pair<std::size_t, std::string>, std::size_t> idx;
        for (std::size_t n = 0; n < gl.nodes.size(); ++n)
            for (const auto& x : datum.sheaves.at(gl.nodes[n].first).at(gl.nodes[n].second)) {
                idx[{n, x}] = items.size();
                items.emplace_back(n, x);
            }
        std::vector<std::size_t> parent(items.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
            const auto& [p, a] = gl.nodes[n];
            for (const auto& [hid, h] : site.arrows()) {
                if (h.src != p || !pi.count(h.dst)) continue;
                const std::string ha = site.compose(hid, a);
                auto target =
                    std::find(gl.nodes.begin(), gl.nodes.end(), std::make_pair(h.dst, ha));
                if (target == gl.nodes.end()) continue;
                std::size_t tn = static_cast<std::size_t>(target - gl.nodes.begin());
                for (const auto& x : datum.sheaves.at(p).at(a)) {
                    const std::string& y = datum.beta(hid, a).at(x);
                    parent[find(idx.at({n, x}))] = find(idx.at({tn, y}));
                }
            }
        }
        // Every node must biject onto the classes.
        std::set<std::size_t> classes;
        for (std::size_t i = 0; i < items.size(); ++i) classes.insert(find(i));
        for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
            std::set<std::size_t> seen;
            for (const auto& x : datum.sheaves.at(gl.nodes[n].first).at(gl.nodes[n].second))
                seen.insert(find(idx.at({n, x})));
            if (seen.size() != classes.size() ||
                seen.size() !=
                    datum.sheaves.at(gl.nodes[n].first).at(gl.nodes[n].second).size())
                throw domain_error(
                    "gluing over '" + t +
                    "' is ambiguous: arrows into the collection are not identified by the "
                    "comparison isomorphisms");
        }
        gl.canonical_p = gl.nodes.front().first;
        gl.canonical_a = gl.nodes.front().second;
        gl.elements = datum.sheaves.at(gl.canonical_p).at(gl.canonical_a);
        // map every (node, element) to the canonical element in its class
        std::map<std::size_t, std::string> class_to_canonical;
        for (const auto& x : gl.elements) class_to_canonical[find(idx.at({0, x}))] = x;
        for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
            auto& m = gl.to_canonical[gl.nodes[n]];
            for (const auto& x : datum.sheaves.at(gl.nodes[n].first).at(gl.nodes[n].second))
                m[x] = class_to_canonical.at(find(idx.at({n, x})));
        }
        glued[t] = std::move(gl);
    }

    SetSheaf out;
    for (const auto& t : spi) out.set_value(t, glued[t].elements);
    for (const auto& [aid, a] : site.arrows()) {
        if (!spi.count(a.src) || !spi.count(a.dst)) continue;
        const Glued& gt = glued.at(a.dst);
        const Glued& gu = glued.at(a.src);
        const SliceSheaf& Fp = datum.sheaves.at(gt.canonical_p);
        std::map<std::string, std::string> m;
        const std::string restricted_obj = site.compose(gt.canonical_a, aid); // a.src -> p0
        for (const auto& x : gt.elements) {
            const std::string& y = Fp.restrict_along(gt.canonical_a, aid, x);
            m[x] = gu.to_canonical.at({gt.canonical_p, restricted_obj}).at(y);
        }
        out.set_map(aid, std::move(m));
    }
    return out;
}

// Glue and then spread out to the whole site; sections over the base
// are the descended sections.
inline SetSheaf descended_sheaf(const FiniteSite& site, const PiSheafDatum& datum) {
    std::set<std::string> pi(datum.pi.begin(), datum.pi.end());
    const std::set<std::string> spi = factorable_subcategory(site, pi);
    SetSheaf glued = glue_pi_sheaf(site, datum);
    if (spi.size() == site.objects().size()) return glued;
    return extend_sheaf(site, spi, glued);
}

struct GroupTable {
    std::vector<std::string> elements;
    std::string identity;
    std::map<std::pair<std::string, std::string>, std::string> mul; // (g, h) -> g*h

    const std::string& product(const std::string& g, const std::string& h) const {
        auto it = mul.find({g, h});
        if (it == mul.end())
            throw input_error("schema", "", "group table missing product '" + g + "'*'" + h + "'");
        return it->second;
    }

    ValidationReport validate() const {
        std::set<std::string> elems(elements.begin(), elements.end());
        if (elems.size() != elements.size()) return ValidationReport::fail("duplicate element");
        if (!elems.count(identity)) return ValidationReport::fail("identity not an element");
        for (const auto& g : elements)
            for (const auto& h : elements) {
                auto it = mul.find({g, h});
                if (it == mul.end())
                    return ValidationReport::fail("missing product '" + g + "'*'" + h + "'");
                if (!elems.count(it->second))
                    return ValidationReport::fail("product outside the group");
            }
        for (const auto& g : elements)
            if (product(identity, g) != g || product(g, identity) != g)
                return ValidationReport::fail("identity law fails at '" + g + "'");
        for (const auto& a : elements)
            for (const auto& b : elements)
                for (const auto& c : elements)
                    if (product(a, product(b, c)) != product(product(a, b), c))
                        return ValidationReport::fail("associativity fails");
        for (const auto& g : elements) {
            bool inv = false;
            for (const auto& h : elements)
                if (product(g, h) == identity && product(h, g) == identity) inv = true;
            if (!inv) return ValidationReport::fail("no inverse for '" + g + "'");
        }
        return ValidationReport::pass();
    }
};

// Elements fixed by every group element of a (possibly twisted) action.
// The action maps must form a left action: id acts trivially and
// action(g*h) = action(g) after action(h).
inline std::vector<std::string>
galois_fixed_points(const GroupTable& group, const std::vector<std::string>& X,
                    const std::map<std::string, std::map<std::string, std::string>>& action) {
    auto rep = group.validate();
    if (!rep) throw input_error("invariant", "", "not a group: " + rep.message);
    auto act = [&](const std::string& g, const std::string& x) -> const std::string& {
        auto it = action.find(g);
        if (it == action.end())
            throw input_error("schema", "", "no action map for group element '" + g + "'");
        auto jt = it->second.find(x);
        if (jt == it->second.end())
            throw input_error("schema", "", "action of '" + g + "' undefined on '" + x + "'");
        return jt->second;
    };
    std::set<std::string> xs(X.begin(), X.end());
    for (const auto& g : group.elements) {
        std::set<std::string> image;
        for (const auto& x : X) {
            const auto& y = act(g, x);
            if (!xs.count(y))
                throw input_error("invariant", "", "action of '" + g + "' leaves the set");
            image.insert(y);
        }
        if (image.size() != xs.size())
            throw input_error("invariant", "", "action of '" + g + "' is not a bijection");
    }
    for (const auto& x : X)
        if (act(group.identity, x) != x)
            throw input_error("invariant", "", "identity does not act trivially");
    for (const auto& g : group.elements)
        for (const auto& h : group.elements)
            for (const auto& x : X)
                if (act(group.product(g, h), x) != act(g, act(h, x)))
                    throw input_error("invariant", "",
                                      "action does not respect the group law at ('" + g + "','" +
                                          h + "')");
    std::vector<std::string> fixed;
    for (const auto& x : X) {
        bool all = true;
        for (const auto& g : group.elements)
            if (act(g, x) != x) {
                all = false;
                break;
            }
        if (all) fixed.push_back(x);
    }
    std::sort(fixed.begin(), fixed.end());
    return fixed;
}

} // namespace llsk
