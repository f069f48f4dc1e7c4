#include "vce/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace vce {

namespace {

std::string vertex_str(int v) { return "vertex " + std::to_string(v); }

}  // namespace

SubstrateTree::SubstrateTree(std::vector<VertexKind> kinds, std::vector<int> parents,
                             std::vector<std::optional<Rational>> capacities)
    : kind_(std::move(kinds)), parent_(std::move(parents)), capacity_(std::move(capacities)) {
    if (validate().ok()) prepare();
}

Validation SubstrateTree::validate() const {
    Validation out;
    const int n = vertex_count();
    if (n == 0) {
        out.violations.push_back("tree has no vertices");
        return out;
    }
    if (static_cast<int>(parent_.size()) != n || static_cast<int>(capacity_.size()) != n) {
        out.violations.push_back("kinds, parents and capacities must have equal length");
        return out;
    }

    int root = -1;
    for (int v = 0; v < n; ++v) {
        const int p = parent_[static_cast<std::size_t>(v)];
        if (p < 0 || p >= n) {
            out.violations.push_back(vertex_str(v) + " has out-of-range parent " + std::to_string(p));
        } else if (p == v) {
            if (root >= 0)
                out.violations.push_back("multiple roots: " + vertex_str(root) + " and " + vertex_str(v));
            else
                root = v;
        }
    }
    if (root < 0) {
        out.violations.push_back("no root (a vertex must be its own parent)");
        return out;
    }
    if (!out.violations.empty()) return out;

    // Every vertex must reach the root (no cycles, no disconnected parts).
    for (int v = 0; v < n; ++v) {
        int cur = v;
        int steps = 0;
        while (cur != root && steps <= n) {
            cur = parent_[static_cast<std::size_t>(cur)];
            ++steps;
        }
        if (cur != root) {
            out.violations.push_back(vertex_str(v) + " does not reach the root (cycle in parent links)");
            return out;
        }
    }

    bool any_server = false;
    for (int v = 0; v < n; ++v) {
        const bool is_server = kind_[static_cast<std::size_t>(v)] == VertexKind::server;
        any_server = any_server || is_server;
        // Leaf test via parent links: a vertex nobody points at (other than itself).
        bool has_child = false;
        for (int u = 0; u < n; ++u) {
            if (u != v && parent_[static_cast<std::size_t>(u)] == v) {
                has_child = true;
                break;
            }
        }
        if (is_server && has_child)
            out.violations.push_back(vertex_str(v) + " is a server but has children");
        if (!is_server && !has_child)
            out.violations.push_back(vertex_str(v) + " is a router but is a leaf");
    }
    if (!any_server) out.violations.push_back("tree has no servers");

    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        const auto& cap = capacity_[static_cast<std::size_t>(v)];
        if (cap && *cap < Rational(0))
            out.violations.push_back("edge above " + vertex_str(v) + " has negative capacity " +
                                     cap->to_string());
    }
    return out;
}

void SubstrateTree::prepare() {
    const int n = vertex_count();
    children_.assign(static_cast<std::size_t>(n), {});
    depth_.assign(static_cast<std::size_t>(n), 0);
    servers_.clear();
    for (int v = 0; v < n; ++v) {
        const int p = parent_[static_cast<std::size_t>(v)];
        if (p == v)
            root_ = v;
        else
            children_[static_cast<std::size_t>(p)].push_back(v);
        if (kind_[static_cast<std::size_t>(v)] == VertexKind::server) servers_.push_back(v);
    }
    for (auto& ch : children_) std::sort(ch.begin(), ch.end());

    // Depths via repeated parent walks would be quadratic; do a BFS from the root.
    std::vector<int> queue{root_};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const int v = queue[i];
        for (int c : children_[static_cast<std::size_t>(v)]) {
            depth_[static_cast<std::size_t>(c)] = depth_[static_cast<std::size_t>(v)] + 1;
            queue.push_back(c);
        }
    }
    prepared_ = true;
}

void SubstrateTree::require_prepared() const {
    if (!prepared_) throw std::logic_error("substrate tree is not valid; check validate() first");
}

int SubstrateTree::root() const {
    require_prepared();
    return root_;
}

int SubstrateTree::depth(int v) const {
    require_prepared();
    if (v < 0 || v >= vertex_count()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return depth_[static_cast<std::size_t>(v)];
}

const std::vector<int>& SubstrateTree::children(int v) const {
    require_prepared();
    if (v < 0 || v >= vertex_count()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return children_[static_cast<std::size_t>(v)];
}

const std::vector<int>& SubstrateTree::servers() const {
    require_prepared();
    return servers_;
}

int dist(const SubstrateTree& tree, int u, int v) {
    if (!tree.prepared()) throw std::logic_error("dist requires a valid tree");
    const int n = tree.vertex_count();
    if (u < 0 || u >= n) throw std::out_of_range("unknown vertex " + std::to_string(u));
    if (v < 0 || v >= n) throw std::out_of_range("unknown vertex " + std::to_string(v));
    int a = u, b = v, hops = 0;
    while (tree.depth(a) > tree.depth(b)) {
        a = tree.parent(a);
        ++hops;
    }
    while (tree.depth(b) > tree.depth(a)) {
        b = tree.parent(b);
        ++hops;
    }
    while (a != b) {
        a = tree.parent(a);
        b = tree.parent(b);
        hops += 2;
    }
    return hops;
}

std::vector<int> path_edges(const SubstrateTree& tree, int u, int v) {
    if (!tree.prepared()) throw std::logic_error("path_edges requires a valid tree");
    const int n = tree.vertex_count();
    if (u < 0 || u >= n) throw std::out_of_range("unknown vertex " + std::to_string(u));
    if (v < 0 || v >= n) throw std::out_of_range("unknown vertex " + std::to_string(v));
    std::vector<int> up, down;
    int a = u, b = v;
    while (tree.depth(a) > tree.depth(b)) {
        up.push_back(a);
        a = tree.parent(a);
    }
    while (tree.depth(b) > tree.depth(a)) {
        down.push_back(b);
        b = tree.parent(b);
    }
    while (a != b) {
        up.push_back(a);
        down.push_back(b);
        a = tree.parent(a);
        b = tree.parent(b);
    }
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

Validation EmbeddingInstance::validate() const {
    Validation out = tree.validate();
    if (!out.ok()) return out;

    if (node_count <= 0) out.violations.push_back("node_count must be positive");
    if (access_bandwidth < Rational(0)) out.violations.push_back("access bandwidth must be non-negative");
    if (interconnect_bandwidth < Rational(0))
        out.violations.push_back("interconnect bandwidth must be non-negative");

    const int n = tree.vertex_count();
    int server_count = 0;
    for (int v = 0; v < n; ++v)
        if (tree.kind(v) == VertexKind::server) ++server_count;
    if (node_count > server_count)
        out.violations.push_back("node_count " + std::to_string(node_count) + " exceeds the " +
                                 std::to_string(server_count) + " available servers");
    for (int t = 1; t <= chunks.type_count(); ++t) {
        const auto& reps = chunks.replicas_of(t);
        if (reps.empty()) {
            out.violations.push_back("chunk type " + std::to_string(t) + " has no replicas");
            continue;
        }
        std::set<int> seen;
        for (int s : reps) {
            if (s < 0 || s >= n) {
                out.violations.push_back("chunk type " + std::to_string(t) + " replica at unknown " +
                                         vertex_str(s));
            } else if (tree.kind(s) != VertexKind::server) {
                out.violations.push_back("chunk type " + std::to_string(t) + " replica at non-server " +
                                         vertex_str(s));
            } else if (!seen.insert(s).second) {
                out.violations.push_back("chunk type " + std::to_string(t) +
                                         " has duplicate replica at " + vertex_str(s));
            }
        }
    }
    return out;
}

Validation validate_tree(const SubstrateTree& tree) { return tree.validate(); }

Validation validate_embedding(const EmbeddingInstance& instance, const Embedding& sol) {
    Validation out = instance.validate();
    if (!out.ok()) return out;

    const int n = instance.tree.vertex_count();
    if (static_cast<int>(sol.placement.size()) != instance.node_count) {
        out.violations.push_back("placement has " + std::to_string(sol.placement.size()) +
                                 " entries for " + std::to_string(instance.node_count) + " nodes");
        return out;
    }
    std::map<int, int> host_of;
    for (int i = 0; i < instance.node_count; ++i) {
        const int s = sol.placement[static_cast<std::size_t>(i)];
        if (s < 0 || s >= n) {
            out.violations.push_back("node " + std::to_string(i) + " placed at unknown " + vertex_str(s));
        } else if (instance.tree.kind(s) != VertexKind::server) {
            out.violations.push_back("node " + std::to_string(i) + " placed at non-server " + vertex_str(s));
        } else {
            auto [it, inserted] = host_of.try_emplace(s, i);
            if (!inserted)
                out.violations.push_back("server " + std::to_string(s) + " overcommitted: hosts nodes " +
                                         std::to_string(it->second) + " and " + std::to_string(i));
        }
    }

    for (int t = 1; t <= instance.chunks.type_count(); ++t) {
        auto it = sol.assignment.find(t);
        if (it == sol.assignment.end()) {
            out.violations.push_back("chunk type " + std::to_string(t) + " has no assignment");
            continue;
        }
        const auto& reps = instance.chunks.replicas_of(t);
        if (it->second.replica < 0 || it->second.replica >= static_cast<int>(reps.size()))
            out.violations.push_back("chunk type " + std::to_string(t) + " uses unknown replica index " +
                                     std::to_string(it->second.replica));
        if (it->second.node < 0 || it->second.node >= instance.node_count)
            out.violations.push_back("chunk type " + std::to_string(t) + " assigned to unknown node " +
                                     std::to_string(it->second.node));
    }
    for (const auto& [t, _] : sol.assignment) {
        if (t < 1 || t > instance.chunks.type_count())
            out.violations.push_back("assignment references unknown chunk type " + std::to_string(t));
    }
    return out;
}

CostReport cost(const EmbeddingInstance& instance, const Embedding& sol) {
    Validation check = validate_embedding(instance, sol);
    if (!check.ok()) throw std::invalid_argument("invalid embedding: " + check.violations.front());

    CostReport report;
    report.transportation_total = Rational(0);
    report.interconnect_total = Rational(0);

    auto add_path = [&](int u, int v, const Rational& bw) -> Rational {
        if (u == v || bw == Rational(0)) return Rational(0);
        Rational total(0);
        for (int e : path_edges(instance.tree, u, v)) {
            auto [it, inserted] = report.per_edge.try_emplace(e, bw);
            if (!inserted) it->second = it->second + bw;
            total = total + bw;
        }
        return total;
    };

    for (const auto& [t, asg] : sol.assignment) {
        const int source = instance.chunks.replicas_of(t)[static_cast<std::size_t>(asg.replica)];
        const int host = sol.placement[static_cast<std::size_t>(asg.node)];
        report.transportation_total =
            report.transportation_total + add_path(source, host, instance.access_bandwidth);
    }
    for (int i = 0; i < instance.node_count; ++i) {
        for (int j = i + 1; j < instance.node_count; ++j) {
            report.interconnect_total =
                report.interconnect_total + add_path(sol.placement[static_cast<std::size_t>(i)],
                                                     sol.placement[static_cast<std::size_t>(j)],
                                                     instance.interconnect_bandwidth);
        }
    }
    report.footprint = report.transportation_total + report.interconnect_total;
    return report;
}

Feasibility feasible(const EmbeddingInstance& instance, const Embedding& sol) {
    CostReport report = cost(instance, sol);  // validates and throws on bad structure
    Feasibility out;
    for (const auto& [edge, demand] : report.per_edge) {
        const auto& cap = instance.tree.capacity(edge);
        if (cap && demand > *cap) out.violations.push_back({edge, demand, *cap});
    }
    return out;
}

}  // namespace vce
