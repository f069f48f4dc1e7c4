#pragma once

#include <chrono>
#include <optional>
#include <utility>

#include "vce/model.hpp"

namespace vce::solver {

struct SolveBudget {
    long long max_states = 10'000'000;  // search-state limit, >= 1
    std::optional<std::chrono::milliseconds> time_limit;
};

enum class SolveStatus { optimal, infeasible, budget_exhausted };

struct SolveResult {
    SolveStatus status = SolveStatus::budget_exhausted;
    std::optional<std::pair<Embedding, CostReport>> best;
    long long explored = 0;
};

enum class Verdict { yes, no, unknown };

struct DecideResult {
    Verdict verdict = Verdict::unknown;
    std::optional<std::pair<Embedding, CostReport>> witness;  // present iff verdict == yes
    long long explored = 0;
};

// Exact branch-and-bound minimization of the footprint. Deterministic and
// single-threaded; `explored` counts committed search decisions (server
// placements and chunk-option choices).
SolveResult solve_exact(const EmbeddingInstance& instance, const SolveBudget& budget = {});

// Is there a feasible embedding with footprint <= threshold? Same search with
// the threshold as the pruning bound and an early exit on the first hit.
Verdict decide(const EmbeddingInstance& instance, const Rational& threshold,
               const SolveBudget& budget = {});

// decide, but keeping the embedding that produced a `yes`.
DecideResult decide_with_witness(const EmbeddingInstance& instance, const Rational& threshold,
                                 const SolveBudget& budget = {});

// First-fit baseline: one node collocated with each chunk type's first free
// replica server, idle nodes packed where marginal interconnect cost is
// lowest. Never claims optimal or infeasible; failure to construct a feasible
// embedding is reported as budget_exhausted with no best.
SolveResult solve_greedy(const EmbeddingInstance& instance);

}  // namespace vce::solver
