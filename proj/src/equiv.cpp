#include "vce/equiv.hpp"

#include <algorithm>
#include <stdexcept>

namespace vce::cli {

std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("rng_below: n must be positive");
    return rng() % n;
}

sat::CnfFormula random_formula(std::mt19937_64& rng, int var_count, int clause_count,
                               int min_width, int max_width) {
    if (var_count < 1) throw std::invalid_argument("random_formula: var_count must be positive");
    if (clause_count < 1)
        throw std::invalid_argument("random_formula: clause_count must be positive");
    if (min_width < 1 || max_width < min_width || max_width > var_count)
        throw std::invalid_argument("random_formula: bad width range");

    std::vector<sat::Clause> clauses;
    std::vector<int> pool(static_cast<std::size_t>(var_count));
    for (int v = 1; v <= var_count; ++v) pool[static_cast<std::size_t>(v - 1)] = v;
    for (int c = 0; c < clause_count; ++c) {
        const int width =
            min_width + static_cast<int>(rng_below(
                            rng, static_cast<std::uint64_t>(max_width - min_width + 1)));
        // Partial Fisher-Yates: the first `width` slots become the clause's variables.
        for (int k = 0; k < width; ++k) {
            const std::size_t j =
                static_cast<std::size_t>(k) +
                static_cast<std::size_t>(rng_below(rng, static_cast<std::uint64_t>(var_count - k)));
            std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
        }
        sat::Clause clause;
        for (int k = 0; k < width; ++k)
            clause.push_back({pool[static_cast<std::size_t>(k)], rng_below(rng, 2) == 0});
        clauses.push_back(std::move(clause));
    }
    return sat::CnfFormula(var_count, std::move(clauses));
}

std::optional<sat::CnfFormula> contradiction_formula(reductions::Variant variant, int var_count,
                                                     int clause_count) {
    using reductions::Variant;
    if (var_count < 1 || clause_count < 1) return std::nullopt;
    if (variant == Variant::multi_replica) {
        if (clause_count < 2) return std::nullopt;
        std::vector<sat::Clause> clauses;
        clauses.push_back({{1, true}});
        clauses.push_back({{1, false}});
        // Satisfiable single-literal fillers keep the requested clause count.
        for (int c = 2; c < clause_count; ++c) {
            const int var = var_count > 1 ? 2 + (c - 2) % (var_count - 1) : 1;
            clauses.push_back({{var, true}});
        }
        return sat::CnfFormula(var_count, std::move(clauses));
    }
    // Exact-3 shape: the eight polarity patterns over x1..x3 exclude every valuation.
    if (var_count < 3 || clause_count < 8) return std::nullopt;
    std::vector<sat::Clause> clauses;
    for (int mask = 0; mask < 8; ++mask)
        clauses.push_back({{1, (mask & 1) != 0}, {2, (mask & 2) != 0}, {3, (mask & 4) != 0}});
    for (int c = 8; c < clause_count; ++c)
        clauses.push_back({{1, true}, {2, true}, {3, true}});
    return sat::CnfFormula(var_count, std::move(clauses));
}

EquivOutcome run_equiv(const EquivConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("run_equiv: trials must be positive");
    const bool two = config.variant == reductions::Variant::two_replica;
    if (two && config.var_count < 3)
        throw std::invalid_argument("run_equiv: exact-3 clauses need at least 3 variables");
    const int min_width = two ? 3 : 1;
    const int max_width = two ? 3 : std::min(3, config.var_count);

    EquivOutcome outcome;
    outcome.summary.trials = config.trials;
    for (int t = 1; t <= config.trials; ++t) {
        TrialRecord rec;
        rec.index = t;
        std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(t));

        std::optional<sat::CnfFormula> formula;
        if (config.inject_every > 0 && t % config.inject_every == 0)
            formula = contradiction_formula(config.variant, config.var_count, config.clause_count);
        rec.injected = formula.has_value();
        if (!formula)
            formula = random_formula(rng, config.var_count, config.clause_count, min_width,
                                     max_width);
        rec.formula_text = formula->to_string();
        rec.expected_sat = sat::solve_sat(*formula).has_value();

        rec.artifacts = two ? reductions::reduce_two_replica(*formula)
                            : reductions::reduce_multi(*formula);
        solver::DecideResult decision = solver::decide_with_witness(
            rec.artifacts.instance, rec.artifacts.threshold, config.budget);
        rec.verdict = decision.verdict;
        rec.explored = decision.explored;
        if (decision.witness) rec.witness = decision.witness->first;

        if (rec.verdict == solver::Verdict::unknown) {
            ++outcome.summary.unknowns;
        } else {
            rec.agree = (rec.verdict == solver::Verdict::yes) == rec.expected_sat;
            if (rec.agree)
                ++outcome.summary.agreements;
            else
                ++outcome.summary.disagreements;
        }
        if (rec.injected) ++outcome.summary.injected;
        outcome.records.push_back(std::move(rec));
    }
    return outcome;
}

}  // namespace vce::cli
