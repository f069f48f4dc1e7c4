#include "vce/reductions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vce::reductions {

namespace {

struct TreeBuilder {
    std::vector<VertexKind> kinds;
    std::vector<int> parents;
    std::vector<std::optional<Rational>> capacities;

    int add(VertexKind kind, int parent, std::optional<Rational> capacity) {
        const int id = static_cast<int>(kinds.size());
        kinds.push_back(kind);
        parents.push_back(parent < 0 ? id : parent);
        capacities.push_back(std::move(capacity));
        return id;
    }

    SubstrateTree build() { return SubstrateTree(kinds, parents, capacities); }
};

std::vector<VariableGadget> build_variable_gadgets(TreeBuilder& tb, int root, int alpha, int beta,
                                                   const Rational& uplink,
                                                   std::map<int, std::string>& labels) {
    std::vector<VariableGadget> gadgets;
    gadgets.reserve(static_cast<std::size_t>(beta));
    for (int v = 1; v <= beta; ++v) {
        VariableGadget g;
        g.variable = v;
        g.root = tb.add(VertexKind::router, root, uplink);
        g.positive = tb.add(VertexKind::router, g.root, std::nullopt);
        for (int i = 1; i <= alpha; ++i) {
            const int leaf = tb.add(VertexKind::server, g.positive, std::nullopt);
            g.positive_leaves.push_back(leaf);
            labels[leaf] = "x" + std::to_string(v) + "@c" + std::to_string(i);
        }
        g.negative = tb.add(VertexKind::router, g.root, std::nullopt);
        for (int i = 1; i <= alpha; ++i) {
            const int leaf = tb.add(VertexKind::server, g.negative, std::nullopt);
            g.negative_leaves.push_back(leaf);
            labels[leaf] = "~x" + std::to_string(v) + "@c" + std::to_string(i);
        }
        gadgets.push_back(std::move(g));
    }
    return gadgets;
}

// Interconnect footprint of the canonical one-sided placement: all positive
// variable-gadget leaves, plus the first two leaves of each clause gadget.
// Chunks play no part (canonical assignments are all collocated, so their
// transportation cost is zero); a chunkless twin instance prices the layout.
Rational canonical_layout_cost(const SubstrateTree& tree, int node_count, const Rational& b2,
                               const std::vector<VariableGadget>& vars,
                               const std::vector<ClauseGadget>& clauses) {
    std::vector<int> placement;
    for (const VariableGadget& g : vars)
        placement.insert(placement.end(), g.positive_leaves.begin(), g.positive_leaves.end());
    for (const ClauseGadget& g : clauses) {
        placement.push_back(g.leaves.at(0));
        placement.push_back(g.leaves.at(1));
    }
    std::sort(placement.begin(), placement.end());
    EmbeddingInstance twin{tree, ChunkCatalog{}, node_count, Rational(0), b2};
    return cost(twin, Embedding{std::move(placement), {}}).footprint;
}

long long choose2(long long n) { return n * (n - 1) / 2; }

}  // namespace

ReductionArtifacts reduce_multi(const sat::CnfFormula& formula) {
    const int alpha = formula.clause_count();
    const int beta = formula.var_count();
    if (beta < 4) throw std::invalid_argument("construction requires at least four variables");
    if (alpha < 1) throw std::invalid_argument("construction requires at least one clause");

    ReductionArtifacts art;
    art.variant = Variant::multi_replica;
    art.alpha = alpha;
    art.beta = beta;
    art.formula = formula;

    const long long a = alpha, b = beta;
    const Rational uplink(a * (a * b - a));

    TreeBuilder tb;
    const int root = tb.add(VertexKind::router, -1, std::nullopt);
    art.variable_gadgets = build_variable_gadgets(tb, root, alpha, beta, uplink, art.label_map);
    SubstrateTree tree = tb.build();

    ChunkCatalog chunks;
    for (int c = 1; c <= alpha; ++c) {
        std::vector<int> replicas;
        for (const sat::Literal& lit : formula.clause(c)) {
            const VariableGadget& g = art.variable_gadgets[static_cast<std::size_t>(lit.var - 1)];
            const auto& side = lit.positive ? g.positive_leaves : g.negative_leaves;
            replicas.push_back(side[static_cast<std::size_t>(c - 1)]);
        }
        std::sort(replicas.begin(), replicas.end());
        chunks.replicas.push_back(std::move(replicas));
        art.chunk_map[c] = {c, std::nullopt};
    }

    const int node_count = alpha * beta;
    art.threshold = canonical_layout_cost(tree, node_count, Rational(1), art.variable_gadgets, {});
    art.closed_form = closed_form_threshold(Variant::multi_replica, alpha, beta);
    art.instance = {std::move(tree), std::move(chunks), node_count, art.threshold + Rational(1),
                    Rational(1)};
    return art;
}

ReductionArtifacts reduce_two_replica(const sat::CnfFormula& formula) {
    const Validation shape = sat::restrict_to_3sat(formula);
    if (!shape.ok()) throw std::invalid_argument(shape.violations.front());
    const int alpha = formula.clause_count();
    const int beta = formula.var_count();
    if (beta < 4) throw std::invalid_argument("construction requires at least four variables");
    if (alpha < 1) throw std::invalid_argument("construction requires at least one clause");

    ReductionArtifacts art;
    art.variant = Variant::two_replica;
    art.alpha = alpha;
    art.beta = beta;
    art.formula = formula;

    const long long a = alpha, b = beta;
    const Rational var_uplink(a * (a * (b - 1) + 2 * a));
    const Rational clause_uplink(2 * (a * b + 2 * (a - 1)));

    TreeBuilder tb;
    const int root = tb.add(VertexKind::router, -1, std::nullopt);
    art.variable_gadgets = build_variable_gadgets(tb, root, alpha, beta, var_uplink, art.label_map);
    for (int c = 1; c <= alpha; ++c) {
        ClauseGadget g;
        g.clause = c;
        g.root = tb.add(VertexKind::router, root, clause_uplink);
        g.middle = tb.add(VertexKind::router, g.root, std::nullopt);
        for (int j = 1; j <= 3; ++j) {
            const int leaf = tb.add(VertexKind::server, g.middle, std::nullopt);
            g.leaves.push_back(leaf);
            art.label_map[leaf] = "C" + std::to_string(c) + "#" + std::to_string(j);
        }
        art.clause_gadgets.push_back(std::move(g));
    }
    SubstrateTree tree = tb.build();

    ChunkCatalog chunks;
    for (int c = 1; c <= alpha; ++c) {
        const sat::Clause& clause = formula.clause(c);
        for (int j = 1; j <= 3; ++j) {
            const sat::Literal& lit = clause[static_cast<std::size_t>(j - 1)];
            const VariableGadget& g = art.variable_gadgets[static_cast<std::size_t>(lit.var - 1)];
            const auto& side = lit.positive ? g.positive_leaves : g.negative_leaves;
            std::vector<int> replicas{side[static_cast<std::size_t>(c - 1)],
                                      art.clause_gadgets[static_cast<std::size_t>(c - 1)]
                                          .leaves[static_cast<std::size_t>(j - 1)]};
            std::sort(replicas.begin(), replicas.end());
            chunks.replicas.push_back(std::move(replicas));
            art.chunk_map[3 * (c - 1) + j] = {c, j};
        }
    }

    const int node_count = alpha * beta + 2 * alpha;
    art.threshold = canonical_layout_cost(tree, node_count, Rational(1), art.variable_gadgets,
                                          art.clause_gadgets);
    art.instance = {std::move(tree), std::move(chunks), node_count, art.threshold + Rational(1),
                    Rational(1)};
    return art;
}

Embedding canonical_embedding(const ReductionArtifacts& art, const sat::Valuation& val) {
    for (int v = 1; v <= art.beta; ++v) val.at(v);  // totality
    if (sat::eval(art.formula, val) != sat::EvalOutcome::satisfied)
        throw std::invalid_argument("valuation does not satisfy the formula");

    std::vector<int> selected;
    for (const VariableGadget& g : art.variable_gadgets) {
        const auto& side = val.at(g.variable) == 1 ? g.positive_leaves : g.negative_leaves;
        selected.insert(selected.end(), side.begin(), side.end());
    }
    if (art.variant == Variant::two_replica) {
        for (const ClauseGadget& g : art.clause_gadgets) {
            const sat::Clause& clause = art.formula.clause(g.clause);
            int satisfied_slot = -1;
            for (std::size_t j = 0; j < clause.size(); ++j) {
                if (val.at(clause[j].var) == (clause[j].positive ? 1 : 0)) {
                    satisfied_slot = static_cast<int>(j);
                    break;
                }
            }
            for (int j = 0; j < 3; ++j)
                if (j != satisfied_slot) selected.push_back(g.leaves[static_cast<std::size_t>(j)]);
        }
    }
    std::sort(selected.begin(), selected.end());

    Embedding emb;
    emb.placement = selected;
    auto node_at = [&](int server) {
        const auto it = std::lower_bound(selected.begin(), selected.end(), server);
        return (it != selected.end() && *it == server) ? static_cast<int>(it - selected.begin()) : -1;
    };
    for (int t = 1; t <= art.instance.chunks.type_count(); ++t) {
        const auto& replicas = art.instance.chunks.replicas_of(t);
        int pick = -1, node = -1;
        for (std::size_t ri = 0; ri < replicas.size(); ++ri) {
            const int n = node_at(replicas[ri]);
            if (n >= 0) {
                pick = static_cast<int>(ri);
                node = n;
                break;
            }
        }
        if (pick < 0)
            throw std::logic_error("no replica of chunk type " + std::to_string(t) +
                                   " is collocated with a node");
        emb.assignment[t] = {pick, node};
    }
    return emb;
}

sat::Valuation extract_valuation(const ReductionArtifacts& art, const Embedding& sol) {
    const Validation v = validate_embedding(art.instance, sol);
    if (!v.ok()) throw std::invalid_argument("invalid embedding: " + v.violations.front());
    if (!feasible(art.instance, sol).ok())
        throw std::invalid_argument("embedding violates edge capacities");
    const CostReport report = cost(art.instance, sol);
    if (report.footprint > art.threshold)
        throw std::invalid_argument("footprint " + report.footprint.to_string() +
                                    " exceeds threshold " + art.threshold.to_string());

    const std::set<int> occupied(sol.placement.begin(), sol.placement.end());
    sat::Valuation out;
    for (const VariableGadget& g : art.variable_gadgets)
        out.assignment[g.variable] = occupied.count(g.positive_leaves.front()) ? 1 : 0;
    return out;
}

Rational compute_threshold(const ReductionArtifacts& art) {
    return canonical_layout_cost(art.instance.tree, art.instance.node_count,
                                 art.instance.interconnect_bandwidth, art.variable_gadgets,
                                 art.clause_gadgets);
}

Rational closed_form_threshold(Variant variant, int alpha, int beta) {
    if (variant != Variant::multi_replica)
        throw std::invalid_argument("no closed-form threshold for the two-replica variant");
    if (alpha < 1 || beta < 1) throw std::invalid_argument("alpha and beta must be positive");
    const long long a = alpha, b = beta;
    return Rational(b * (2 * choose2(a) + a * (a * b - a)));
}

}  // namespace vce::reductions
