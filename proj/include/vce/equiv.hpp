#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vce/reductions.hpp"
#include "vce/sat.hpp"
#include "vce/solver.hpp"

namespace vce::cli {

// Uniform draw in [0, n), n >= 1. Plain modulo on the raw engine output so the
// sequence is identical across standard-library implementations.
std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n);

// Random CNF: clause widths uniform in [min_width, max_width], distinct
// variables per clause, independent random polarities.
sat::CnfFormula random_formula(std::mt19937_64& rng, int var_count, int clause_count,
                               int min_width, int max_width);

// Handcrafted unsatisfiable formula of the requested shape, or nullopt when no
// contradiction fits: the multi-replica shape needs at least two clauses, the
// two-replica shape needs at least eight exact-3 clauses over three variables.
std::optional<sat::CnfFormula> contradiction_formula(reductions::Variant variant, int var_count,
                                                     int clause_count);

struct EquivConfig {
    reductions::Variant variant = reductions::Variant::multi_replica;
    int var_count = 4;     // beta
    int clause_count = 2;  // alpha
    int trials = 50;
    std::uint64_t seed = 0;
    solver::SolveBudget budget;
    int inject_every = 5;  // trials 5, 10, ... get a contradiction when one fits the shape
};

struct TrialRecord {
    int index = 0;  // 1-based
    bool injected = false;
    std::string formula_text;
    bool expected_sat = false;
    solver::Verdict verdict = solver::Verdict::unknown;
    bool agree = false;  // verdict matches expected_sat (unknown never agrees)
    long long explored = 0;
    std::optional<Embedding> witness;  // present iff verdict == yes
    reductions::ReductionArtifacts artifacts;
};

struct EquivSummary {
    int trials = 0;
    int agreements = 0;
    int disagreements = 0;  // definite verdict contradicting the SAT oracle
    int unknowns = 0;       // budget-exhausted trials, reported separately
    int injected = 0;
};

struct EquivOutcome {
    EquivSummary summary;
    std::vector<TrialRecord> records;
};

// End-to-end experiment: per trial, draw (or inject) a formula of the
// configured shape, reduce it, and compare solve_sat against decide at the
// derived threshold. Clause widths are 1..3 for the multi-replica variant and
// exactly 3 for the two-replica variant. Deterministic for a fixed config:
// trial t draws from an engine seeded with seed + t.
EquivOutcome run_equiv(const EquivConfig& config);

}  // namespace vce::cli
