#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vce/rational.hpp"

namespace vce {

enum class VertexKind { server, router };

struct Validation {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Rooted substrate tree. Vertices are dense 0-based ids; the root is the
// vertex whose parent entry is itself. capacity[v] is the bandwidth of the
// edge v -> parent(v) (nullopt = unbounded); the root entry is ignored.
//
// The object is plain data and may hold an invalid tree (validate() reports
// violations); traversal queries require a valid tree and throw otherwise.
class SubstrateTree {
public:
    SubstrateTree() = default;
    SubstrateTree(std::vector<VertexKind> kinds, std::vector<int> parents,
                  std::vector<std::optional<Rational>> capacities);

    int vertex_count() const { return static_cast<int>(kind_.size()); }
    VertexKind kind(int v) const { return kind_.at(static_cast<std::size_t>(v)); }
    int parent(int v) const { return parent_.at(static_cast<std::size_t>(v)); }
    const std::optional<Rational>& capacity(int child) const {
        return capacity_.at(static_cast<std::size_t>(child));
    }

    const std::vector<VertexKind>& kinds() const { return kind_; }
    const std::vector<int>& parents() const { return parent_; }
    const std::vector<std::optional<Rational>>& capacities() const { return capacity_; }

    Validation validate() const;

    // Valid trees only (throw std::logic_error otherwise).
    bool prepared() const { return prepared_; }
    int root() const;
    int depth(int v) const;
    const std::vector<int>& children(int v) const;
    const std::vector<int>& servers() const;  // ascending ids

private:
    void prepare();
    void require_prepared() const;

    std::vector<VertexKind> kind_;
    std::vector<int> parent_;
    std::vector<std::optional<Rational>> capacity_;

    bool prepared_ = false;
    int root_ = -1;
    std::vector<int> depth_;
    std::vector<std::vector<int>> children_;
    std::vector<int> servers_;
};

// Hop count of the unique u-v path. Symmetric, dist(u,u) = 0.
int dist(const SubstrateTree& tree, int u, int v);

// Edges of the unique u-v path in path order, each named by its child vertex.
std::vector<int> path_edges(const SubstrateTree& tree, int u, int v);

// Chunk type ids are 1-based (type t stores its replicas at replicas[t-1]).
struct ChunkCatalog {
    std::vector<std::vector<int>> replicas;

    int type_count() const { return static_cast<int>(replicas.size()); }
    const std::vector<int>& replicas_of(int type) const {
        return replicas.at(static_cast<std::size_t>(type - 1));
    }
};

struct EmbeddingInstance {
    SubstrateTree tree;
    ChunkCatalog chunks;
    int node_count = 0;
    Rational access_bandwidth;        // b1, chunk -> node
    Rational interconnect_bandwidth;  // b2, node <-> node

    Validation validate() const;
};

struct ChunkAssignment {
    int replica = -1;  // 0-based index into the type's replica list
    int node = -1;

    friend bool operator==(const ChunkAssignment&, const ChunkAssignment&) = default;
};

// Node ids are dense 0-based. placement[v] is the hosting server; assignment
// maps each chunk type to its active replica and processing node.
struct Embedding {
    std::vector<int> placement;
    std::map<int, ChunkAssignment> assignment;
};

struct CostReport {
    std::map<int, Rational> per_edge;  // child-id -> reserved bandwidth
    Rational transportation_total;
    Rational interconnect_total;
    Rational footprint;
};

struct EdgeViolation {
    int edge = -1;
    Rational demand;
    Rational capacity;
};

struct Feasibility {
    std::vector<EdgeViolation> violations;
    bool ok() const { return violations.empty(); }
};

Validation validate_tree(const SubstrateTree& tree);
Validation validate_embedding(const EmbeddingInstance& instance, const Embedding& sol);

// Footprint of an embedding: per-edge reservations plus the two totals.
// Throws std::invalid_argument if the embedding is structurally invalid.
CostReport cost(const EmbeddingInstance& instance, const Embedding& sol);

// Capacity check: every edge's reservation within its capacity.
Feasibility feasible(const EmbeddingInstance& instance, const Embedding& sol);

}  // namespace vce
