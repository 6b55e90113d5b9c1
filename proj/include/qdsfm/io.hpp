#pragma once

// JSON formats.
//
// instance:   {"n": N, "a": [...], "w": [...]?, "atoms": [atom, ...]}
// atom:       {"type": "edge"|"hyperedge"|"directed_hyperedge"|"table",
//              "members": [...], "head": [...], "tail": [...], "weight": w,
//              "table": {"<bitmask>": value, ...} or [v_0, ..., v_{2^m - 1}]}
//             keys are decimal, 0x hex or 0b binary masks; bit k refers to
//             the k-th smallest member; every nonempty subset must be
//             listed and the empty set may be omitted.
// hypergraph: {"n": N, "hyperedges": [atom, ...]}  (cut types only)
// labels:     {"labels": {"<vertex>": class, ...}, "classes": K?}
// schema:     {"columns": [{"name": .., "kind": "categorical"|"numeric"|"ignore"}],
//              "missing": [...]?, "bins": 10?, "binning": "equal-width"|"equal-frequency"?,
//              "has_header": true?}
// graph:      {"n": N, "edges": [[i, j], ...], "s": [...]?}

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/applications/pagerank.hpp"
#include "qdsfm/applications/ssl.hpp"
#include "qdsfm/applications/tabular.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/problem.hpp"
#include "qdsfm/solvers.hpp"

namespace qdsfm::io {

using json = nlohmann::json;

inline json load_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

namespace detail {

inline std::vector<std::size_t> index_list(const json& j, const char* key)
{
    if (!j.contains(key)) return {};
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw InvalidArgument(std::string("'") + key + "' must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw InvalidArgument(std::string("'") + key + "' must hold nonnegative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

inline std::vector<double> number_list(const json& j, const char* key)
{
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw InvalidArgument(std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) throw InvalidArgument(std::string("'") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline SubmodularAtom parse_atom(const json& j)
{
    if (!j.is_object()) throw InvalidArgument("atom must be an object");
    const std::string type = j.value("type", std::string("hyperedge"));
    const double weight = j.value("weight", 1.0);
    auto members = index_list(j, "members");
    if (type == "edge") {
        if (members.size() != 2) throw InvalidArgument("edge needs exactly two members");
        return SubmodularAtom::graph_edge(members[0], members[1], weight);
    }
    if (type == "hyperedge") return SubmodularAtom::hyperedge(std::move(members), weight);
    if (type == "directed_hyperedge") {
        const auto head = index_list(j, "head");
        const auto tail = index_list(j, "tail");
        return SubmodularAtom::directed_hyperedge(std::move(members), head, tail, weight);
    }
    if (type == "table") {
        std::sort(members.begin(), members.end());
        const std::size_t m = members.size();
        if (m > kMaxExhaustiveSize) throw CapacityError("table atoms support at most 20 members");
        const std::size_t full = std::size_t{1} << m;
        std::vector<double> values(full, 0.0);
        std::vector<bool> seen(full, false);
        seen[0] = true;
        if (!j.contains("table")) throw InvalidArgument("table atom needs a 'table'");
        const auto& t = j.at("table");
        if (t.is_array()) {
            if (t.size() != full) throw InvalidArgument("table array must have 2^|members| entries");
            for (std::size_t s = 0; s < full; ++s) {
                values[s] = t[s].get<double>();
                seen[s] = true;
            }
        } else if (t.is_object()) {
            for (const auto& [key, val] : t.items()) {
                std::size_t mask = 0;
                try {
                    const bool binary = key.size() > 2 && key[0] == '0' && (key[1] == 'b' || key[1] == 'B');
                    const std::string digits = binary ? key.substr(2) : key;
                    std::size_t used = 0;
                    mask = std::stoull(digits, &used, binary ? 2 : 0);
                    if (used != digits.size()) throw InvalidArgument("trailing characters");
                } catch (const std::exception&) {
                    throw InvalidArgument("table key '" + key + "' is not a bitmask");
                }
                if (mask >= full) throw InvalidArgument("table key '" + key + "' exceeds the member count");
                values[mask] = val.get<double>();
                seen[mask] = true;
            }
        } else {
            throw InvalidArgument("'table' must be an object or array");
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw InvalidArgument("table must list every nonempty subset");
        return SubmodularAtom::from_table(std::move(members), std::move(values), weight);
    }
    throw InvalidArgument("unknown atom type '" + type + "'");
}

}  // namespace detail

inline json atom_to_json(const SubmodularAtom& atom)
{
    json j;
    j["type"] = to_string(atom.kind());
    j["members"] = std::vector<std::size_t>(atom.members().begin(), atom.members().end());
    j["weight"] = atom.weight();
    if (atom.kind() == AtomKind::DirectedHyperedge) {
        std::vector<std::size_t> head;
        std::vector<std::size_t> tail;
        for (std::size_t k = 0; k < atom.size(); ++k) {
            if (atom.in_head(k)) head.push_back(atom.members()[k]);
            if (atom.in_tail(k)) tail.push_back(atom.members()[k]);
        }
        j["head"] = head;
        j["tail"] = tail;
    }
    if (const auto* table = atom.table()) j["table"] = *table;
    return j;
}

inline ProblemInstance instance_from_json(const json& j)
{
    try {
        ProblemInstance inst;
        inst.n = j.at("n").get<std::size_t>();
        inst.a = detail::number_list(j, "a");
        if (j.contains("w"))
            inst.w = WeightMatrix(detail::number_list(j, "w"));
        else
            inst.w = WeightMatrix::identity(inst.n);
        const auto& atoms = j.at("atoms");
        if (!atoms.is_array()) throw InvalidArgument("'atoms' must be an array");
        for (std::size_t r = 0; r < atoms.size(); ++r) {
            try {
                inst.atoms.push_back(detail::parse_atom(atoms[r]));
            } catch (const std::exception& e) {
                throw InvalidArgument("atom " + std::to_string(r) + ": " + e.what());
            }
        }
        inst.validate();
        return inst;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed instance: ") + e.what());
    }
}

inline json instance_to_json(const ProblemInstance& inst)
{
    json j;
    j["n"] = inst.n;
    j["a"] = inst.a;
    j["w"] = std::vector<double>(inst.w.diagonal().begin(), inst.w.diagonal().end());
    j["atoms"] = json::array();
    for (const auto& atom : inst.atoms) j["atoms"].push_back(atom_to_json(atom));
    return j;
}

inline Hypergraph hypergraph_from_json(const json& j)
{
    try {
        Hypergraph hg;
        hg.n = j.at("n").get<std::size_t>();
        const auto& edges = j.contains("hyperedges") ? j.at("hyperedges") : j.at("atoms");
        for (std::size_t r = 0; r < edges.size(); ++r) {
            const auto& e = edges[r];
            const std::string type = e.value("type", std::string("hyperedge"));
            if (type == "table") throw InvalidArgument("hyperedge " + std::to_string(r) + ": table atoms not allowed");
            Hyperedge h;
            h.members = detail::index_list(e, "members");
            h.weight = e.value("weight", 1.0);
            if (type == "directed_hyperedge") {
                h.head = detail::index_list(e, "head");
                h.tail = detail::index_list(e, "tail");
            }
            hg.edges.push_back(std::move(h));
        }
        hg.validate();
        return hg;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed hypergraph: ") + e.what());
    }
}

inline json hypergraph_to_json(const Hypergraph& hg)
{
    json j;
    j["n"] = hg.n;
    j["hyperedges"] = json::array();
    for (const auto& e : hg.edges) {
        json h;
        h["type"] = e.directed() ? "directed_hyperedge" : "hyperedge";
        h["members"] = e.members;
        h["weight"] = e.weight;
        if (e.directed()) {
            h["head"] = e.head;
            h["tail"] = e.tail;
        }
        j["hyperedges"].push_back(std::move(h));
    }
    return j;
}

inline LabeledDataset labels_from_json(const json& j, std::size_t n)
{
    try {
        LabeledDataset ds;
        ds.n = n;
        std::size_t max_class = 0;
        for (const auto& [key, val] : j.at("labels").items()) {
            std::size_t v = 0;
            try {
                v = std::stoull(key);
            } catch (const std::exception&) {
                throw InvalidArgument("label key '" + key + "' is not a vertex index");
            }
            if (v >= n) throw InvalidArgument("label references vertex " + key + " outside [0, " + std::to_string(n) + ")");
            const auto k = val.get<std::size_t>();
            ds.labels[v] = k;
            max_class = std::max(max_class, k);
        }
        ds.num_classes = std::max<std::size_t>(j.value("classes", max_class + 1), 2);
        ds.validate();
        return ds;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed labels: ") + e.what());
    }
}

inline json labels_to_json(const LabeledDataset& ds)
{
    json j;
    j["classes"] = ds.num_classes;
    j["labels"] = json::object();
    for (const auto& [v, k] : ds.labels) j["labels"][std::to_string(v)] = k;
    return j;
}

inline TableSchema schema_from_json(const json& j)
{
    try {
        TableSchema s;
        for (const auto& c : j.at("columns")) {
            ColumnSpec col;
            col.name = c.value("name", std::string());
            const std::string kind = c.at("kind").get<std::string>();
            if (kind == "categorical")
                col.kind = ColumnKind::Categorical;
            else if (kind == "numeric")
                col.kind = ColumnKind::Numeric;
            else if (kind == "ignore")
                col.kind = ColumnKind::Ignore;
            else
                throw InvalidArgument("column '" + col.name + "' has unknown kind '" + kind + "'");
            s.columns.push_back(std::move(col));
        }
        if (j.contains("missing")) s.missing = j.at("missing").get<std::set<std::string>>();
        s.bins = j.value("bins", std::size_t{10});
        s.has_header = j.value("has_header", true);
        const std::string binning = j.value("binning", std::string("equal-width"));
        if (binning == "equal-width")
            s.binning = Binning::EqualWidth;
        else if (binning == "equal-frequency")
            s.binning = Binning::EqualFrequency;
        else
            throw InvalidArgument("unknown binning '" + binning + "'");
        return s;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed schema: ") + e.what());
    }
}

struct GraphFile
{
    Graph graph;
    std::vector<double> seed_vector;
};

inline GraphFile graph_from_json(const json& j)
{
    try {
        GraphFile g;
        g.graph.n = j.at("n").get<std::size_t>();
        for (const auto& e : j.at("edges")) g.graph.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        g.graph.validate();
        if (j.contains("s"))
            g.seed_vector = detail::number_list(j, "s");
        return g;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed graph: ") + e.what());
    }
}

inline json solution_to_json(const SolveResult& res)
{
    json j;
    j["x"] = res.x;
    j["gap"] = res.gap;
    j["iters"] = res.iterations;
    j["converged"] = res.converged;
    return j;
}

}  // namespace qdsfm::io
