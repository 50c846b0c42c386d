#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llsk/descent.hpp"
#include "llsk/dual_graph.hpp"
#include "llsk/errors.hpp"
#include "llsk/lls.hpp"
#include "llsk/multidegree.hpp"
#include "llsk/schubert.hpp"

// JSON schemas for the domain values. Parsing validates shape and
// invariants and reports structured errors with a location; writers
// produce the same shapes back.

namespace llsk {
namespace io {

using nlohmann::json;

inline json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw input_error("json", what, "malformed JSON");
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("json", path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw input_error("schema", where, "missing field '" + key + "'");
    return j.at(key);
}

inline std::string string_field(const json& j, const std::string& key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) throw input_error("schema", where + "/" + key, "expected a string");
    return v.get<std::string>();
}

inline long long int_field(const json& j, const std::string& key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) throw input_error("schema", where + "/" + key, "expected an integer");
    return v.get<long long>();
}

} // namespace detail

// {"vertices":[{"id":"v1","genus":0}],"edges":[{"id":"e1","ends":["v1","v2"]}],
//  "marks":[{"vertex":"v1","label":"P1"}]}
inline DualGraph parse_graph(const json& j, const std::string& where = "/graph") {
    using detail::field;
    std::vector<Vertex> vertices;
    const json& vs = field(j, "vertices", where);
    if (!vs.is_array()) throw input_error("schema", where + "/vertices", "expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string at = where + "/vertices/" + std::to_string(i);
        int genus = 0;
        if (vs[i].contains("genus")) genus = static_cast<int>(detail::int_field(vs[i], "genus", at));
        vertices.push_back({detail::string_field(vs[i], "id", at), genus});
    }
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        const json& es = j.at("edges");
        if (!es.is_array()) throw input_error("schema", where + "/edges", "expected an array");
        for (std::size_t i = 0; i < es.size(); ++i) {
            const std::string at = where + "/edges/" + std::to_string(i);
            const json& ends = field(es[i], "ends", at);
            if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() ||
                !ends[1].is_string())
                throw input_error("schema", at + "/ends", "expected two vertex ids");
            edges.push_back({detail::string_field(es[i], "id", at),
                             {ends[0].get<std::string>(), ends[1].get<std::string>()}});
        }
    }
    std::vector<MarkedPoint> marks;
    if (j.contains("marks")) {
        const json& ms = j.at("marks");
        if (!ms.is_array()) throw input_error("schema", where + "/marks", "expected an array");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string at = where + "/marks/" + std::to_string(i);
            marks.push_back({detail::string_field(ms[i], "vertex", at),
                             detail::string_field(ms[i], "label", at)});
        }
    }
    return DualGraph(std::move(vertices), std::move(edges), std::move(marks));
}

inline json graph_to_json(const DualGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices()) j["vertices"].push_back({{"id", v.id}, {"genus", v.genus}});
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({{"id", e.id}, {"ends", {e.ends[0], e.ends[1]}}});
    if (!g.marks().empty()) {
        j["marks"] = json::array();
        for (const auto& m : g.marks())
            j["marks"].push_back({{"vertex", m.vertex}, {"label", m.label}});
    }
    return j;
}

// {"total":<graph>,"fibers":[{"base":"b0","nodal_edges":["e1"]}]}
inline GraphFamily parse_family(const json& j, const std::string& where = "/family") {
    GraphFamily fam;
    fam.total = parse_graph(detail::field(j, "total", where), where + "/total");
    const json& fs = detail::field(j, "fibers", where);
    if (!fs.is_array()) throw input_error("schema", where + "/fibers", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string at = where + "/fibers/" + std::to_string(i);
        GraphFamily::Fiber f;
        f.base = detail::string_field(fs[i], "base", at);
        const json& ne = detail::field(fs[i], "nodal_edges", at);
        if (!ne.is_array()) throw input_error("schema", at + "/nodal_edges", "expected an array");
        for (const auto& e : ne) {
            if (!e.is_string()) throw input_error("schema", at + "/nodal_edges", "expected edge ids");
            f.nodal_edges.insert(e.get<std::string>());
        }
        fam.fibers.push_back(std::move(f));
    }
    auto rep = validate_family(fam);
    if (!rep) throw input_error("invariant", where, rep.message);
    return fam;
}

// {"d":4,"sides":[{"edge":"e1","half":["v1"],"value":1}]}
inline Multidegree parse_multidegree(const json& j, const DualGraph& g,
                                     const std::string& where = "/multidegree") {
    int d = static_cast<int>(detail::int_field(j, "d", where));
    const json& sides = detail::field(j, "sides", where);
    if (!sides.is_array()) throw input_error("schema", where + "/sides", "expected an array");
    std::vector<SideValue> svs;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        const std::string at = where + "/sides/" + std::to_string(i);
        SideValue sv;
        sv.edge = detail::string_field(sides[i], "edge", at);
        sv.value = detail::int_field(sides[i], "value", at);
        const json& half = detail::field(sides[i], "half", at);
        if (!half.is_array()) throw input_error("schema", at + "/half", "expected vertex ids");
        for (const auto& v : half) {
            if (!v.is_string()) throw input_error("schema", at + "/half", "expected vertex ids");
            sv.half.insert(v.get<std::string>());
        }
        svs.push_back(std::move(sv));
    }
    return Multidegree::from_sides(g, d, svs);
}

inline json multidegree_to_json(const DualGraph& g, const Multidegree& md) {
    json j;
    j["d"] = md.degree();
    j["sides"] = json::array();
    for (const auto& [edge, value] : md.canonical_values()) {
        auto [first, second] = split_at_edge(g, edge);
        json side;
        side["edge"] = edge;
        side["half"] = json::array();
        for (const auto& v : first) side["half"].push_back(v);
        side["value"] = value;
        j["sides"].push_back(std::move(side));
    }
    return j;
}

inline json fiber_degrees_to_json(const FiberDegrees& fd) {
    json j = json::object();
    for (const auto& [v, deg] : fd) j[v] = deg;
    return j;
}

// {"vertex_map":{"v1":"v2",...},"edge_map":{"e1":"e2",...}}  or a list of such
inline GraphAutomorphism parse_automorphism(const json& j, const std::string& where = "/autom") {
    GraphAutomorphism a;
    const json& vm = detail::field(j, "vertex_map", where);
    const json& em = detail::field(j, "edge_map", where);
    if (!vm.is_object() || !em.is_object())
        throw input_error("schema", where, "expected vertex_map and edge_map objects");
    for (auto it = vm.begin(); it != vm.end(); ++it) {
        if (!it.value().is_string())
            throw input_error("schema", where + "/vertex_map", "expected vertex ids");
        a.vertex_map[it.key()] = it.value().get<std::string>();
    }
    for (auto it = em.begin(); it != em.end(); ++it) {
        if (!it.value().is_string())
            throw input_error("schema", where + "/edge_map", "expected edge ids");
        a.edge_map[it.key()] = it.value().get<std::string>();
    }
    return a;
}

inline std::vector<GraphAutomorphism> parse_automorphisms(const json& j,
                                                          const std::string& where = "/autom") {
    std::vector<GraphAutomorphism> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(parse_automorphism(j[i], where + "/" + std::to_string(i)));
    } else {
        out.push_back(parse_automorphism(j, where));
    }
    return out;
}

// Text form of a partition: comma-separated parts, e.g. "2,1"; empty
// string for the empty partition.
inline Partition parse_partition_text(const std::string& text, int r, int d) {
    std::vector<int> parts;
    if (!text.empty() && text != "0") {
        std::stringstream ss(text);
        std::string piece;
        while (std::getline(ss, piece, ',')) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(piece, &pos);
                if (pos != piece.size()) throw std::invalid_argument(piece);
                parts.push_back(v);
            } catch (const std::exception&) {
                throw input_error("schema", "", "bad partition text '" + text + "'");
            }
        }
    }
    return Partition(r + 1, d - r, std::move(parts));
}

inline json enumeration_to_json(const DualGraph& g, const Enumeration& en) {
    json j;
    j["r"] = en.r;
    j["d"] = en.d;
    j["genus"] = en.genus;
    j["general_position_assumed"] = en.general_position;
    j["count"] = en.total().str();
    j["types"] = json::array();
    for (const auto& t : en.types) {
        json jt;
        jt["sequences"] = json::array();
        for (const auto& [key, seq] : t.sequences) {
            json js;
            js["edge"] = key.first;
            js["at"] = key.second;
            js["seq"] = seq.values();
            jt["sequences"].push_back(std::move(js));
        }
        jt["vertices"] = json::array();
        for (const auto& [v, m] : t.vertex_multiplicity)
            jt["vertices"].push_back({{"vertex", v}, {"multiplicity", m.str()}});
        jt["multiplicity"] = t.multiplicity().str();
        jt["refined"] = is_refined(g, t);
        j["types"].push_back(std::move(jt));
    }
    return j;
}

inline json real_counts_to_json(const RealCountReport& rep) {
    json j;
    j["d"] = rep.d;
    j["total"] = json::parse(rep.total.str());
    j["cools_coppens"] = json::parse(rep.cools_coppens.str());
    j["eremenko_gabrielov"] = json::parse(rep.eremenko_gabrielov.str());
    if (rep.odd_no_real) j["odd_no_real"] = true;
    return j;
}

// Site JSON: objects, arrows {"id","src","dst"}, identities {obj: arrow},
// compose [{"g","f","gf"}] (identity composites may be omitted),
// coverings [{"target","by":[...]}], fiber_products
// [{"left","right","object","proj_left","proj_right"}].
inline FiniteSite parse_site(const json& j, const std::string& where = "/site") {
    using detail::field;
    std::vector<std::string> objects;
    for (const auto& o : field(j, "objects", where)) {
        if (!o.is_string()) throw input_error("schema", where + "/objects", "expected strings");
        objects.push_back(o.get<std::string>());
    }
    std::vector<SiteArrow> arrows;
    for (std::size_t i = 0; i < field(j, "arrows", where).size(); ++i) {
        const json& a = j.at("arrows")[i];
        const std::string at = where + "/arrows/" + std::to_string(i);
        arrows.push_back({detail::string_field(a, "id", at), detail::string_field(a, "src", at),
                          detail::string_field(a, "dst", at)});
    }
    std::map<std::string, std::string> identities;
    const json& ids = field(j, "identities", where);
    if (!ids.is_object()) throw input_error("schema", where + "/identities", "expected an object");
    for (auto it = ids.begin(); it != ids.end(); ++it)
        identities[it.key()] = it.value().get<std::string>();
    std::map<std::pair<std::string, std::string>, std::string> compose;
    if (j.contains("compose"))
        for (std::size_t i = 0; i < j.at("compose").size(); ++i) {
            const json& c = j.at("compose")[i];
            const std::string at = where + "/compose/" + std::to_string(i);
            compose[{detail::string_field(c, "g", at), detail::string_field(c, "f", at)}] =
                detail::string_field(c, "gf", at);
        }
    std::vector<SiteCovering> coverings;
    if (j.contains("coverings"))
        for (std::size_t i = 0; i < j.at("coverings").size(); ++i) {
            const json& c = j.at("coverings")[i];
            const std::string at = where + "/coverings/" + std::to_string(i);
            SiteCovering cov;
            cov.target = detail::string_field(c, "target", at);
            for (const auto& m : field(c, "by", at)) cov.by.push_back(m.get<std::string>());
            coverings.push_back(std::move(cov));
        }
    std::vector<FiberProductDecl> fps;
    if (j.contains("fiber_products"))
        for (std::size_t i = 0; i < j.at("fiber_products").size(); ++i) {
            const json& c = j.at("fiber_products")[i];
            const std::string at = where + "/fiber_products/" + std::to_string(i);
            fps.push_back({detail::string_field(c, "left", at),
                           detail::string_field(c, "right", at),
                           detail::string_field(c, "object", at),
                           detail::string_field(c, "proj_left", at),
                           detail::string_field(c, "proj_right", at)});
        }
    return FiniteSite(std::move(objects), std::move(arrows), std::move(identities),
                      std::move(compose), std::move(coverings), std::move(fps));
}

// Sheaf JSON: {"sets":{obj:[...]},"maps":{arrow:{elem:elem}}}
inline SetSheaf parse_sheaf(const json& j, const std::string& where = "/sheaf") {
    SetSheaf F;
    const json& sets = detail::field(j, "sets", where);
    if (!sets.is_object()) throw input_error("schema", where + "/sets", "expected an object");
    for (auto it = sets.begin(); it != sets.end(); ++it) {
        std::vector<std::string> elems;
        for (const auto& e : it.value()) elems.push_back(e.get<std::string>());
        F.set_value(it.key(), std::move(elems));
    }
    const json& maps = detail::field(j, "maps", where);
    if (!maps.is_object()) throw input_error("schema", where + "/maps", "expected an object");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
        std::map<std::string, std::string> m;
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
            m[jt.key()] = jt.value().get<std::string>();
        F.set_map(it.key(), std::move(m));
    }
    return F;
}

inline json sheaf_to_json(const SetSheaf& F) {
    json j;
    j["sets"] = json::object();
    for (const auto& [o, elems] : F.values()) j["sets"][o] = elems;
    j["maps"] = json::object();
    for (const auto& [a, m] : F.maps()) {
        json jm = json::object();
        for (const auto& [x, y] : m) jm[x] = y;
        j["maps"][a] = std::move(jm);
    }
    return j;
}

// Datum JSON: {"pi":[...],
//   "slices":[{"p":...,"sets":[{"arrow":a,"elements":[...]}],
//              "restrictions":[{"of":b,"along":h,"map":{...}}]}],
//   "betas":[{"f":arrow,"at":a,"map":{...}}]}
inline PiSheafDatum parse_pi_datum(const json& j, const std::string& where = "/datum") {
    PiSheafDatum datum;
    for (const auto& p : detail::field(j, "pi", where)) datum.pi.push_back(p.get<std::string>());
    for (std::size_t i = 0; i < detail::field(j, "slices", where).size(); ++i) {
        const json& s = j.at("slices")[i];
        const std::string at = where + "/slices/" + std::to_string(i);
        SliceSheaf sheaf;
        sheaf.p = detail::string_field(s, "p", at);
        for (const auto& entry : detail::field(s, "sets", at)) {
            std::vector<std::string> elems;
            for (const auto& e : entry.at("elements")) elems.push_back(e.get<std::string>());
            sheaf.sets[entry.at("arrow").get<std::string>()] = std::move(elems);
        }
        for (const auto& entry : detail::field(s, "restrictions", at)) {
            std::map<std::string, std::string> m;
            for (auto it = entry.at("map").begin(); it != entry.at("map").end(); ++it)
                m[it.key()] = it.value().get<std::string>();
            sheaf.restrictions[{entry.at("of").get<std::string>(),
                                entry.at("along").get<std::string>()}] = std::move(m);
        }
        datum.sheaves[sheaf.p] = std::move(sheaf);
    }
    for (const auto& entry : detail::field(j, "betas", where)) {
        std::map<std::string, std::string> m;
        for (auto it = entry.at("map").begin(); it != entry.at("map").end(); ++it)
            m[it.key()] = it.value().get<std::string>();
        datum.betas[entry.at("f").get<std::string>()][entry.at("at").get<std::string>()] =
            std::move(m);
    }
    return datum;
}

inline json pi_datum_to_json(const PiSheafDatum& datum) {
    json j;
    j["pi"] = datum.pi;
    j["slices"] = json::array();
    for (const auto& [p, sheaf] : datum.sheaves) {
        json js;
        js["p"] = p;
        js["sets"] = json::array();
        for (const auto& [a, elems] : sheaf.sets)
            js["sets"].push_back({{"arrow", a}, {"elements", elems}});
        js["restrictions"] = json::array();
        for (const auto& [key, m] : sheaf.restrictions) {
            json jm = json::object();
            for (const auto& [x, y] : m) jm[x] = y;
            js["restrictions"].push_back({{"of", key.first}, {"along", key.second}, {"map", jm}});
        }
        j["slices"].push_back(std::move(js));
    }
    j["betas"] = json::array();
    for (const auto& [f, comps] : datum.betas)
        for (const auto& [a, m] : comps) {
            json jm = json::object();
            for (const auto& [x, y] : m) jm[x] = y;
            j["betas"].push_back({{"f", f}, {"at", a}, {"map", jm}});
        }
    return j;
}

inline json site_to_json(const FiniteSite& site) {
    json j;
    j["objects"] = site.objects();
    j["arrows"] = json::array();
    for (const auto& [id, a] : site.arrows())
        j["arrows"].push_back({{"id", id}, {"src", a.src}, {"dst", a.dst}});
    j["identities"] = json::object();
    for (const auto& o : site.objects()) j["identities"][o] = site.identity(o);
    j["compose"] = json::array();
    for (const auto& [gid, g] : site.arrows())
        for (const auto& [fid, f] : site.arrows())
            if (f.dst == g.src)
                j["compose"].push_back({{"g", gid}, {"f", fid}, {"gf", site.compose(gid, fid)}});
    j["coverings"] = json::array();
    for (const auto& cov : site.coverings())
        j["coverings"].push_back({{"target", cov.target}, {"by", cov.by}});
    j["fiber_products"] = json::array();
    for (const auto& fp : site.fiber_products())
        j["fiber_products"].push_back({{"left", fp.left},
                                       {"right", fp.right},
                                       {"object", fp.object},
                                       {"proj_left", fp.proj_left},
                                       {"proj_right", fp.proj_right}});
    return j;
}

} // namespace io
} // namespace llsk
