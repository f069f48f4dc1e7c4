#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vce/model.hpp"
#include "vce/rational.hpp"
#include "vce/sat.hpp"

namespace vce::reductions {

enum class Variant { multi_replica, two_replica };

struct VariableGadget {
    int variable = 0;  // 1-based
    int root = -1;
    int positive = -1;
    int negative = -1;
    std::vector<int> positive_leaves;  // slot i (0-based) belongs to clause i+1
    std::vector<int> negative_leaves;
};

struct ClauseGadget {
    int clause = 0;  // 1-based
    int root = -1;
    int middle = -1;
    std::vector<int> leaves;  // one per literal slot
};

struct ChunkOrigin {
    int clause = 0;
    std::optional<int> slot;  // literal slot, two-replica variant only
};

struct ReductionArtifacts {
    Variant variant = Variant::multi_replica;
    int alpha = 0;  // clauses
    int beta = 0;   // variables
    sat::CnfFormula formula;
    EmbeddingInstance instance;
    Rational threshold;                        // cost of a canonical embedding
    std::optional<Rational> closed_form;       // closed-form value, multi-replica only
    std::map<int, std::string> label_map;      // leaf vertex -> literal/clause label
    std::map<int, ChunkOrigin> chunk_map;      // chunk type -> source clause (and slot)
    std::vector<VariableGadget> variable_gadgets;
    std::vector<ClauseGadget> clause_gadgets;  // two-replica variant only
};

// One variable gadget per variable (root, positive/negative sides, alpha
// leaves per side), one chunk type per clause with a replica at each
// satisfying literal's leaf. Uplink capacity alpha*(alpha*beta - alpha),
// n_V = alpha*beta, b2 = 1, b1 = threshold + 1. Requires beta >= 4.
ReductionArtifacts reduce_multi(const sat::CnfFormula& formula);

// Variable gadgets plus one clause gadget per clause (root, middle, 3
// leaves); per clause, 3 chunk types with 2 replicas each (variable-gadget
// leaf + clause-gadget leaf). Variable uplink alpha*(alpha*(beta-1)+2*alpha),
// clause uplink 2*(alpha*beta+2*(alpha-1)), n_V = alpha*beta + 2*alpha,
// b2 = 1, b1 = threshold + 1. Requires exact-3 clauses and beta >= 4.
ReductionArtifacts reduce_two_replica(const sat::CnfFormula& formula);

// The embedding a satisfying valuation induces: alpha nodes on each selected
// variable-gadget side (and, in the two-replica variant, 2 nodes per clause
// gadget on the leaves of the non-selected literal slots), chunks assigned to
// collocated nodes. Throws std::invalid_argument when val does not satisfy
// the formula. The result is feasible with footprint exactly art.threshold.
Embedding canonical_embedding(const ReductionArtifacts& art, const sat::Valuation& val);

// Reads a valuation off a feasible embedding with footprint <= threshold:
// variable is true iff the first positive-side leaf of its gadget hosts a
// node. Throws std::invalid_argument when the embedding breaks that contract.
sat::Valuation extract_valuation(const ReductionArtifacts& art, const Embedding& sol);

// Footprint of one canonical one-sided embedding (all-positive sides; first
// two leaves of each clause gadget) — identical across all canonical
// embeddings by gadget symmetry. This value is the reduction's threshold.
Rational compute_threshold(const ReductionArtifacts& art);

// The multi-replica closed form beta*(2*C(alpha,2) + alpha*(alpha*beta-alpha))
// evaluated verbatim; kept for the record alongside compute_threshold (the
// two disagree — see the discrepancy tests). Throws for two_replica.
Rational closed_form_threshold(Variant variant, int alpha, int beta);

}  // namespace vce::reductions
