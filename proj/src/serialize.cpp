#include "vce/serialize.hpp"

#include <fstream>
#include <sstream>

namespace vce::io {

namespace {

const Json& need(const Json& doc, const char* key, const std::string& where) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

void check_header(const Json& doc, const char* kind, const std::string& where) {
    if (!doc.is_object()) throw ParseError(where + ": document must be an object");
    const Json& format = need(doc, "format", where);
    if (!format.is_number_integer() || format.get<int>() != 1)
        throw ParseError(where + ": unsupported format (expected 1)");
    const Json& k = need(doc, "kind", where);
    if (!k.is_string() || k.get<std::string>() != kind)
        throw ParseError(where + ": expected kind '" + std::string(kind) + "'");
}

int int_field(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
    return j.get<int>();
}

int parse_id_key(const std::string& key, const std::string& where) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(key, &pos);
    } catch (const std::exception&) {
        throw ParseError(where + ": bad id key '" + key + "'");
    }
    if (pos != key.size()) throw ParseError(where + ": bad id key '" + key + "'");
    return value;
}

Json assignment_to_json(const std::map<int, ChunkAssignment>& assignment) {
    Json out = Json::object();
    for (const auto& [type, asg] : assignment) {
        Json entry;
        entry["replica"] = asg.replica;
        entry["node"] = asg.node;
        out[std::to_string(type)] = std::move(entry);
    }
    return out;
}

void append_cost_fields(Json& doc, const CostReport& report) {
    doc["footprint"] = rational_to_json(report.footprint);
    doc["transportation_total"] = rational_to_json(report.transportation_total);
    doc["interconnect_total"] = rational_to_json(report.interconnect_total);
    Json per_edge = Json::object();
    for (const auto& [edge, demand] : report.per_edge)
        per_edge[std::to_string(edge)] = rational_to_json(demand);
    doc["per_edge"] = std::move(per_edge);
}

}  // namespace

Json rational_to_json(const Rational& r) {
    if (r.is_integer()) return r.numerator();
    return r.to_string();
}

Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    throw ParseError(where + ": rational values must be integers or \"p/q\" strings");
}

Json instance_to_json(const EmbeddingInstance& instance) {
    Json doc;
    doc["format"] = 1;
    doc["kind"] = "instance";
    Json tree;
    Json kinds = Json::array();
    for (VertexKind k : instance.tree.kinds())
        kinds.push_back(k == VertexKind::server ? "server" : "router");
    tree["kinds"] = std::move(kinds);
    tree["parents"] = instance.tree.parents();
    Json caps = Json::array();
    for (const auto& cap : instance.tree.capacities())
        caps.push_back(cap ? rational_to_json(*cap) : Json(-1));
    tree["capacities"] = std::move(caps);
    doc["tree"] = std::move(tree);
    doc["chunks"] = instance.chunks.replicas;
    doc["node_count"] = instance.node_count;
    doc["access_bandwidth"] = rational_to_json(instance.access_bandwidth);
    doc["interconnect_bandwidth"] = rational_to_json(instance.interconnect_bandwidth);
    return doc;
}

EmbeddingInstance instance_from_json(const Json& doc) {
    const std::string where = "instance document";
    check_header(doc, "instance", where);
    const Json& tree = need(doc, "tree", where);
    const Json& kinds = need(tree, "kinds", where);
    const Json& parents = need(tree, "parents", where);
    const Json& caps = need(tree, "capacities", where);
    if (!kinds.is_array() || !parents.is_array() || !caps.is_array())
        throw ParseError(where + ": tree fields must be arrays");
    if (kinds.size() != parents.size() || kinds.size() != caps.size())
        throw ParseError(where + ": kinds, parents and capacities lengths differ");

    std::vector<VertexKind> kind_vec;
    for (const Json& k : kinds) {
        if (!k.is_string()) throw ParseError(where + ": vertex kinds must be strings");
        const std::string s = k.get<std::string>();
        if (s == "server")
            kind_vec.push_back(VertexKind::server);
        else if (s == "router")
            kind_vec.push_back(VertexKind::router);
        else
            throw ParseError(where + ": unknown vertex kind '" + s + "'");
    }
    std::vector<int> parent_vec;
    for (const Json& p : parents) parent_vec.push_back(int_field(p, where + ": parents"));
    std::vector<std::optional<Rational>> cap_vec;
    for (const Json& c : caps) {
        if (c.is_number_integer() && c.get<std::int64_t>() == -1)
            cap_vec.push_back(std::nullopt);
        else
            cap_vec.push_back(rational_from_json(c, where + ": capacities"));
    }

    EmbeddingInstance instance;
    instance.tree = SubstrateTree(std::move(kind_vec), std::move(parent_vec), std::move(cap_vec));
    const Json& chunks = need(doc, "chunks", where);
    if (!chunks.is_array()) throw ParseError(where + ": chunks must be an array");
    for (const Json& type : chunks) {
        if (!type.is_array()) throw ParseError(where + ": each chunk type must be an array");
        std::vector<int> replicas;
        for (const Json& r : type) replicas.push_back(int_field(r, where + ": chunk replicas"));
        instance.chunks.replicas.push_back(std::move(replicas));
    }
    instance.node_count = int_field(need(doc, "node_count", where), where + ": node_count");
    instance.access_bandwidth =
        rational_from_json(need(doc, "access_bandwidth", where), where + ": access_bandwidth");
    instance.interconnect_bandwidth = rational_from_json(need(doc, "interconnect_bandwidth", where),
                                                         where + ": interconnect_bandwidth");
    return instance;
}

Json embedding_to_json(const Embedding& embedding) {
    Json doc;
    doc["format"] = 1;
    doc["kind"] = "embedding";
    doc["placement"] = embedding.placement;
    doc["assignment"] = assignment_to_json(embedding.assignment);
    return doc;
}

Embedding embedding_from_json(const Json& doc) {
    const std::string where = "embedding document";
    check_header(doc, "embedding", where);
    Embedding out;
    const Json& placement = need(doc, "placement", where);
    if (!placement.is_array()) throw ParseError(where + ": placement must be an array");
    for (const Json& p : placement) out.placement.push_back(int_field(p, where + ": placement"));
    const Json& assignment = need(doc, "assignment", where);
    if (!assignment.is_object()) throw ParseError(where + ": assignment must be an object");
    for (const auto& [key, value] : assignment.items()) {
        const int type = parse_id_key(key, where + ": assignment");
        ChunkAssignment asg;
        asg.replica = int_field(need(value, "replica", where + ": assignment"), where + ": replica");
        asg.node = int_field(need(value, "node", where + ": assignment"), where + ": node");
        out.assignment[type] = asg;
    }
    return out;
}

Json result_to_json(const solver::SolveResult& result) {
    Json doc;
    doc["format"] = 1;
    doc["kind"] = "result";
    switch (result.status) {
        case solver::SolveStatus::optimal: doc["status"] = "optimal"; break;
        case solver::SolveStatus::infeasible: doc["status"] = "infeasible"; break;
        case solver::SolveStatus::budget_exhausted: doc["status"] = "budget_exhausted"; break;
    }
    doc["explored"] = result.explored;
    if (result.best) {
        append_cost_fields(doc, result.best->second);
        doc["placement"] = result.best->first.placement;
        doc["assignment"] = assignment_to_json(result.best->first.assignment);
    }
    return doc;
}

Json decision_to_json(const solver::DecideResult& result, const Rational& threshold) {
    Json doc;
    doc["format"] = 1;
    doc["kind"] = "decision";
    switch (result.verdict) {
        case solver::Verdict::yes: doc["verdict"] = "yes"; break;
        case solver::Verdict::no: doc["verdict"] = "no"; break;
        case solver::Verdict::unknown: doc["verdict"] = "unknown"; break;
    }
    doc["threshold"] = rational_to_json(threshold);
    doc["explored"] = result.explored;
    if (result.witness) {
        append_cost_fields(doc, result.witness->second);
        doc["placement"] = result.witness->first.placement;
        doc["assignment"] = assignment_to_json(result.witness->first.assignment);
    }
    return doc;
}

Json metadata_to_json(const reductions::ReductionArtifacts& art) {
    Json doc;
    doc["format"] = 1;
    doc["kind"] = "reduction_metadata";
    doc["variant"] =
        art.variant == reductions::Variant::multi_replica ? "multi_replica" : "two_replica";
    doc["alpha"] = art.alpha;
    doc["beta"] = art.beta;
    doc["formula"] = art.formula.to_string();
    doc["threshold"] = rational_to_json(art.threshold);
    if (art.closed_form) doc["closed_form_threshold"] = rational_to_json(*art.closed_form);
    doc["node_count"] = art.instance.node_count;
    doc["access_bandwidth"] = rational_to_json(art.instance.access_bandwidth);
    doc["interconnect_bandwidth"] = rational_to_json(art.instance.interconnect_bandwidth);
    Json labels = Json::object();
    for (const auto& [leaf, label] : art.label_map) labels[std::to_string(leaf)] = label;
    doc["label_map"] = std::move(labels);
    Json chunk_map = Json::object();
    for (const auto& [type, origin] : art.chunk_map) {
        Json entry;
        entry["clause"] = origin.clause;
        if (origin.slot) entry["slot"] = *origin.slot;
        chunk_map[std::to_string(type)] = std::move(entry);
    }
    doc["chunk_map"] = std::move(chunk_map);
    Json variables = Json::array();
    for (const auto& g : art.variable_gadgets) {
        Json entry;
        entry["variable"] = g.variable;
        entry["root"] = g.root;
        entry["positive"] = g.positive;
        entry["negative"] = g.negative;
        entry["positive_leaves"] = g.positive_leaves;
        entry["negative_leaves"] = g.negative_leaves;
        variables.push_back(std::move(entry));
    }
    doc["variable_gadgets"] = std::move(variables);
    if (art.variant == reductions::Variant::two_replica) {
        Json clauses = Json::array();
        for (const auto& g : art.clause_gadgets) {
            Json entry;
            entry["clause"] = g.clause;
            entry["root"] = g.root;
            entry["middle"] = g.middle;
            entry["leaves"] = g.leaves;
            clauses.push_back(std::move(entry));
        }
        doc["clause_gadgets"] = std::move(clauses);
    }
    return doc;
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_document(const std::string& text) {
    try {
        Json doc = Json::parse(text);
        if (!doc.is_object()) throw ParseError("document must be a JSON object");
        return doc;
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

Json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

void save_document(const std::string& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << dump_document(doc);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vce::io
