#include "vce/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "vce/errors.hpp"

namespace vce::sat {

CnfFormula::CnfFormula(int var_count, std::vector<Clause> clauses) : var_count_(var_count) {
    if (var_count < 1) throw std::invalid_argument("formula needs at least one variable");
    clauses_.reserve(clauses.size());
    for (auto& raw : clauses) {
        if (raw.empty()) throw std::invalid_argument("empty clause");
        Clause norm;
        for (const Literal& lit : raw) {
            if (lit.var < 1 || lit.var > var_count)
                throw std::invalid_argument("literal references variable " + std::to_string(lit.var) +
                                            " outside 1.." + std::to_string(var_count));
            if (std::find(norm.begin(), norm.end(), lit) == norm.end()) norm.push_back(lit);
        }
        clauses_.push_back(std::move(norm));
    }
}

std::string CnfFormula::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        if (i) out += " & ";
        out += "(";
        for (std::size_t j = 0; j < clauses_[i].size(); ++j) {
            if (j) out += " | ";
            if (!clauses_[i][j].positive) out += "~";
            out += "x" + std::to_string(clauses_[i][j].var);
        }
        out += ")";
    }
    return out.empty() ? "()" : out;
}

int Valuation::at(int var) const {
    auto it = assignment.find(var);
    if (it == assignment.end())
        throw std::invalid_argument("valuation missing variable " + std::to_string(var));
    return it->second;
}

EvalOutcome eval(const CnfFormula& formula, const Valuation& val) {
    for (const Clause& clause : formula.clauses()) {
        bool sat = false;
        for (const Literal& lit : clause) {
            if (val.at(lit.var) == (lit.positive ? 1 : 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return EvalOutcome::falsified;
    }
    return EvalOutcome::satisfied;
}

namespace {

struct Dpll {
    int n = 0;
    std::vector<std::vector<int>> clauses;  // signed literals, +v / -v
    std::vector<int> value;                 // 1..n; -1 unassigned, else 0/1

    // Unit propagation to fixpoint. False when some clause is falsified.
    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& clause : clauses) {
                int unassigned = 0;
                int last = 0;
                bool sat = false;
                for (int lit : clause) {
                    const int v = std::abs(lit);
                    if (value[static_cast<std::size_t>(v)] == -1) {
                        ++unassigned;
                        last = lit;
                    } else if ((lit > 0) == (value[static_cast<std::size_t>(v)] == 1)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    value[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : 0;
                    changed = true;
                }
            }
        }
        return true;
    }

    bool search() {
        const std::vector<int> snapshot = value;
        if (!propagate()) {
            value = snapshot;
            return false;
        }
        int pick = 0;
        for (int v = 1; v <= n; ++v) {
            if (value[static_cast<std::size_t>(v)] == -1) {
                pick = v;
                break;
            }
        }
        if (pick == 0) return true;  // fully assigned, nothing falsified
        const std::vector<int> branched = value;
        for (int bit : {1, 0}) {
            value = branched;
            value[static_cast<std::size_t>(pick)] = bit;
            if (search()) return true;
        }
        value = snapshot;
        return false;
    }
};

}  // namespace

std::optional<Valuation> solve_sat(const CnfFormula& formula) {
    Dpll engine;
    engine.n = formula.var_count();
    engine.value.assign(static_cast<std::size_t>(engine.n) + 1, -1);
    for (const Clause& clause : formula.clauses()) {
        std::vector<int> lits;
        lits.reserve(clause.size());
        for (const Literal& lit : clause) lits.push_back(lit.positive ? lit.var : -lit.var);
        engine.clauses.push_back(std::move(lits));
    }
    if (!engine.search()) return std::nullopt;
    Valuation val;
    for (int v = 1; v <= engine.n; ++v) {
        const int b = engine.value[static_cast<std::size_t>(v)];
        val.assignment[v] = b == -1 ? 1 : b;  // unreachable in practice; total anyway
    }
    return val;
}

Validation restrict_to_3sat(const CnfFormula& formula) {
    Validation out;
    for (int i = 1; i <= formula.clause_count(); ++i) {
        const std::size_t width = formula.clause(i).size();
        if (width != 3)
            out.violations.push_back("clause " + std::to_string(i) + " has " + std::to_string(width) +
                                     " literals, expected exactly 3");
    }
    return out;
}

CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int vars = -1, clause_count = -1;
    std::vector<Clause> clauses;
    Clause current;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'c') continue;
        if (line[0] == 'p') {
            if (vars >= 0) throw ParseError("DIMACS: duplicate problem line");
            std::istringstream header(line);
            std::string p, fmt;
            if (!(header >> p >> fmt >> vars >> clause_count) || fmt != "cnf" || vars < 1 ||
                clause_count < 0)
                throw ParseError("DIMACS: malformed problem line: " + line);
            continue;
        }
        if (vars < 0) throw ParseError("DIMACS: clause data before problem line");
        std::istringstream body(line);
        int lit = 0;
        while (body >> lit) {
            if (lit == 0) {
                if (current.empty()) throw ParseError("DIMACS: empty clause");
                clauses.push_back(current);
                current.clear();
            } else {
                const int v = std::abs(lit);
                if (v > vars)
                    throw ParseError("DIMACS: literal " + std::to_string(lit) + " exceeds declared " +
                                     std::to_string(vars) + " variables");
                current.push_back({v, lit > 0});
            }
        }
        std::string trailing;
        body.clear();
        if (body >> trailing) throw ParseError("DIMACS: unexpected token: " + trailing);
    }
    if (vars < 0) throw ParseError("DIMACS: missing problem line");
    if (!current.empty()) throw ParseError("DIMACS: last clause not terminated by 0");
    if (static_cast<int>(clauses.size()) != clause_count)
        throw ParseError("DIMACS: header declares " + std::to_string(clause_count) + " clauses, found " +
                         std::to_string(clauses.size()));
    try {
        return CnfFormula(vars, std::move(clauses));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("DIMACS: ") + e.what());
    }
}

std::string to_dimacs(const CnfFormula& formula) {
    std::string out =
        "p cnf " + std::to_string(formula.var_count()) + " " + std::to_string(formula.clause_count()) + "\n";
    for (const Clause& clause : formula.clauses()) {
        for (const Literal& lit : clause) out += std::to_string(lit.positive ? lit.var : -lit.var) + " ";
        out += "0\n";
    }
    return out;
}

}  // namespace vce::sat
