#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vce/model.hpp"

namespace vce::sat {

struct Literal {
    int var = 0;  // 1-based variable index
    bool positive = true;

    friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

// CNF over variables 1..var_count(). Construction normalizes each clause by
// removing duplicate literals (same variable, same polarity); tautological
// clauses (x and not-x together) are kept as written.
class CnfFormula {
public:
    CnfFormula() = default;  // empty formula, no variables
    CnfFormula(int var_count, std::vector<Clause> clauses);

    int var_count() const { return var_count_; }
    int clause_count() const { return static_cast<int>(clauses_.size()); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& clause(int index) const {  // 1-based, matching chunk-type ids
        return clauses_.at(static_cast<std::size_t>(index - 1));
    }

    std::string to_string() const;  // e.g. "(x1 | ~x2) & (x3)"

private:
    int var_count_ = 0;
    std::vector<Clause> clauses_;
};

struct Valuation {
    std::map<int, int> assignment;  // variable -> 0/1

    int at(int var) const;  // throws std::invalid_argument when missing
};

enum class EvalOutcome { satisfied, falsified };

EvalOutcome eval(const CnfFormula& formula, const Valuation& val);

// DPLL with unit propagation. Deterministic: branches on the lowest
// unassigned variable, true first.
std::optional<Valuation> solve_sat(const CnfFormula& formula);

// ok iff every clause has exactly 3 literals after normalization.
Validation restrict_to_3sat(const CnfFormula& formula);

// Standard DIMACS: optional comment lines, "p cnf <vars> <clauses>" header,
// whitespace-separated literals with 0 terminating each clause.
CnfFormula parse_dimacs(const std::string& text);
std::string to_dimacs(const CnfFormula& formula);

}  // namespace vce::sat
