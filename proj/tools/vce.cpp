#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vce/equiv.hpp"
#include "vce/errors.hpp"
#include "vce/lemmas.hpp"
#include "vce/model.hpp"
#include "vce/reductions.hpp"
#include "vce/sat.hpp"
#include "vce/serialize.hpp"
#include "vce/solver.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitMalformed = 3;

struct CommandConfig {
    std::string subcommand;
    std::string input;          // DIMACS (reduce) or instance document
    std::string embedding;      // verify
    std::string output;         // single-document commands; empty = stdout
    std::string instance_out;   // reduce
    std::string metadata_out;   // reduce
    std::string canonical_out;  // reduce, optional
    std::string variant = "multi";
    std::string threshold;    // decide/verify: rational text
    std::string metadata_in;  // decide/verify: threshold from a metadata document
    long long max_states = 10'000'000;
    long long time_limit_ms = -1;  // < 0 = unlimited
    int alpha = 0;                 // lemma-check
    int beta = 0;
    bool extended = false;
    long long max_sequences = -1;  // < 0 = library default
    int vars = 0;  // equiv
    int clauses = 0;
    int trials = 0;
    std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vce::ParseError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

vce::solver::SolveBudget budget_of(const CommandConfig& config) {
    vce::solver::SolveBudget budget;
    budget.max_states = config.max_states;
    if (config.time_limit_ms >= 0)
        budget.time_limit = std::chrono::milliseconds(config.time_limit_ms);
    return budget;
}

vce::reductions::Variant variant_of(const CommandConfig& config) {
    return config.variant == "two-replica" ? vce::reductions::Variant::two_replica
                                           : vce::reductions::Variant::multi_replica;
}

vce::EmbeddingInstance load_instance(const std::string& path) {
    vce::EmbeddingInstance instance = vce::io::instance_from_json(vce::io::load_document(path));
    vce::Validation validation = instance.validate();
    if (!validation.ok()) {
        std::string message = "invalid instance";
        for (const std::string& v : validation.violations) message += "\n  " + v;
        throw vce::ParseError(message);
    }
    return instance;
}

// Threshold from --threshold text or a reduction-metadata document.
vce::Rational threshold_of(const CommandConfig& config) {
    if (!config.threshold.empty() && !config.metadata_in.empty())
        throw vce::ParseError("give either --threshold or --metadata, not both");
    if (!config.threshold.empty()) {
        try {
            return vce::Rational::parse(config.threshold);
        } catch (const std::invalid_argument& e) {
            throw vce::ParseError(std::string("bad --threshold: ") + e.what());
        }
    }
    if (!config.metadata_in.empty()) {
        vce::io::Json doc = vce::io::load_document(config.metadata_in);
        auto it = doc.find("threshold");
        if (it == doc.end())
            throw vce::ParseError("metadata document has no 'threshold' field");
        return vce::io::rational_from_json(*it, "metadata threshold");
    }
    throw vce::ParseError("a threshold is required: pass --threshold or --metadata");
}

int run_reduce(const CommandConfig& config) {
    vce::sat::CnfFormula formula = vce::sat::parse_dimacs(read_file(config.input));
    vce::reductions::ReductionArtifacts art =
        variant_of(config) == vce::reductions::Variant::two_replica
            ? vce::reductions::reduce_two_replica(formula)
            : vce::reductions::reduce_multi(formula);
    vce::io::save_document(config.instance_out, vce::io::instance_to_json(art.instance));
    vce::io::save_document(config.metadata_out, vce::io::metadata_to_json(art));
    if (!config.canonical_out.empty()) {
        std::optional<vce::sat::Valuation> val = vce::sat::solve_sat(formula);
        if (!val) {
            std::cerr << "formula is unsatisfiable; no canonical embedding\n";
            return kExitNo;
        }
        vce::io::save_document(config.canonical_out,
                               vce::io::embedding_to_json(
                                   vce::reductions::canonical_embedding(art, *val)));
    }
    return kExitYes;
}

int run_solve(const CommandConfig& config) {
    vce::EmbeddingInstance instance = load_instance(config.input);
    vce::solver::SolveResult result = vce::solver::solve_exact(instance, budget_of(config));
    emit(config.output, vce::io::dump_document(vce::io::result_to_json(result)));
    switch (result.status) {
        case vce::solver::SolveStatus::optimal: return kExitYes;
        case vce::solver::SolveStatus::infeasible: return kExitNo;
        case vce::solver::SolveStatus::budget_exhausted: return kExitUnknown;
    }
    return kExitUnknown;
}

int run_decide(const CommandConfig& config) {
    vce::EmbeddingInstance instance = load_instance(config.input);
    vce::Rational threshold = threshold_of(config);
    vce::solver::DecideResult result =
        vce::solver::decide_with_witness(instance, threshold, budget_of(config));
    emit(config.output, vce::io::dump_document(vce::io::decision_to_json(result, threshold)));
    switch (result.verdict) {
        case vce::solver::Verdict::yes: return kExitYes;
        case vce::solver::Verdict::no: return kExitNo;
        case vce::solver::Verdict::unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

// Accepts an embedding document, or a result/decision document that carries
// a placement (so `solve` output can be verified directly).
vce::Embedding load_embedding(const std::string& path) {
    vce::io::Json doc = vce::io::load_document(path);
    const auto kind = doc.find("kind");
    if (kind != doc.end() && kind->is_string() &&
        (kind->get<std::string>() == "result" || kind->get<std::string>() == "decision")) {
        if (!doc.contains("placement"))
            throw vce::ParseError(kind->get<std::string>() +
                                  " document carries no embedding to verify");
        vce::io::Json emb;
        emb["format"] = 1;
        emb["kind"] = "embedding";
        emb["placement"] = doc.at("placement");
        emb["assignment"] = doc.contains("assignment") ? doc.at("assignment")
                                                       : vce::io::Json::object();
        return vce::io::embedding_from_json(emb);
    }
    return vce::io::embedding_from_json(doc);
}

int run_verify(const CommandConfig& config) {
    vce::EmbeddingInstance instance = load_instance(config.input);
    vce::Embedding sol = load_embedding(config.embedding);

    vce::io::Json doc;
    doc["format"] = 1;
    doc["kind"] = "verification";
    vce::Validation validation = vce::validate_embedding(instance, sol);
    doc["valid"] = validation.ok();
    doc["violations"] = validation.violations;
    if (!validation.ok()) {
        emit(config.output, vce::io::dump_document(doc));
        return kExitNo;
    }

    vce::CostReport report = vce::cost(instance, sol);
    vce::Feasibility feasibility = vce::feasible(instance, sol);
    doc["feasible"] = feasibility.ok();
    vce::io::Json edge_violations = vce::io::Json::array();
    for (const vce::EdgeViolation& v : feasibility.violations) {
        vce::io::Json entry;
        entry["edge"] = v.edge;
        entry["demand"] = vce::io::rational_to_json(v.demand);
        entry["capacity"] = vce::io::rational_to_json(v.capacity);
        edge_violations.push_back(std::move(entry));
    }
    doc["edge_violations"] = std::move(edge_violations);
    doc["footprint"] = vce::io::rational_to_json(report.footprint);
    doc["transportation_total"] = vce::io::rational_to_json(report.transportation_total);
    doc["interconnect_total"] = vce::io::rational_to_json(report.interconnect_total);
    vce::io::Json per_edge = vce::io::Json::object();
    for (const auto& [edge, demand] : report.per_edge)
        per_edge[std::to_string(edge)] = vce::io::rational_to_json(demand);
    doc["per_edge"] = std::move(per_edge);

    bool within = true;
    if (!config.threshold.empty() || !config.metadata_in.empty()) {
        vce::Rational threshold = threshold_of(config);
        within = !(threshold < report.footprint);
        doc["threshold"] = vce::io::rational_to_json(threshold);
        doc["within_threshold"] = within;
    }
    emit(config.output, vce::io::dump_document(doc));
    return feasibility.ok() && within ? kExitYes : kExitNo;
}

int run_lemma_check(const CommandConfig& config) {
    vce::lemmas::VerificationReport rep;
    if (config.extended)
        rep = config.max_sequences >= 0
                  ? vce::lemmas::verify_extended_lemma(config.alpha, config.beta,
                                                       config.max_sequences)
                  : vce::lemmas::verify_extended_lemma(config.alpha, config.beta);
    else
        rep = config.max_sequences >= 0
                  ? vce::lemmas::verify_bandwidth_lemma(config.alpha, config.beta,
                                                        config.max_sequences)
                  : vce::lemmas::verify_bandwidth_lemma(config.alpha, config.beta);

    std::ostringstream out;
    out << (config.extended ? "extended bandwidth lemma" : "bandwidth lemma")
        << " check: alpha=" << rep.alpha << " beta=" << rep.beta << "\n";
    out << "sequences checked: " << rep.sequences_checked << "\n";
    out << "passing: " << rep.passing << "\n";
    out << "verified: " << (rep.verified ? "yes" : "no") << "\n";
    out << "within stated range: " << (rep.within_stated_range ? "yes" : "no") << "\n";
    if (rep.aggregate_passing) out << "aggregate passing: " << *rep.aggregate_passing << "\n";
    if (rep.procedures_agree)
        out << "procedures agree: " << (*rep.procedures_agree ? "yes" : "no") << "\n";
    if (rep.minus_form_passing) out << "minus-form passing: " << *rep.minus_form_passing << "\n";
    if (rep.counterexample_variable) {
        out << "counterexample variable loads:";
        for (long long v : *rep.counterexample_variable) out << " " << v;
        out << "\n";
    }
    if (rep.counterexample_clause) {
        out << "counterexample clause loads:";
        for (long long v : *rep.counterexample_clause) out << " " << v;
        out << "\n";
    }
    for (const std::string& note : rep.notes) out << "note: " << note << "\n";
    emit(config.output, out.str());
    return rep.verified ? kExitYes : kExitNo;
}

int run_equiv_command(const CommandConfig& config) {
    vce::cli::EquivConfig ec;
    ec.variant = variant_of(config);
    ec.var_count = config.vars;
    ec.clause_count = config.clauses;
    ec.trials = config.trials;
    ec.seed = config.seed;
    ec.budget = budget_of(config);
    vce::cli::EquivOutcome outcome = vce::cli::run_equiv(ec);

    std::ostringstream out;
    out << std::setw(5) << "trial" << std::setw(10) << "injected" << std::setw(10) << "expected"
        << std::setw(9) << "verdict" << std::setw(7) << "agree" << std::setw(10) << "explored"
        << "  formula\n";
    for (const vce::cli::TrialRecord& rec : outcome.records) {
        const char* verdict = rec.verdict == vce::solver::Verdict::yes
                                  ? "yes"
                                  : rec.verdict == vce::solver::Verdict::no ? "no" : "unknown";
        const char* agree =
            rec.verdict == vce::solver::Verdict::unknown ? "-" : rec.agree ? "yes" : "no";
        out << std::setw(5) << rec.index << std::setw(10) << (rec.injected ? "yes" : "no")
            << std::setw(10) << (rec.expected_sat ? "sat" : "unsat") << std::setw(9) << verdict
            << std::setw(7) << agree << std::setw(10) << rec.explored << "  " << rec.formula_text
            << "\n";
    }
    const vce::cli::EquivSummary& s = outcome.summary;
    out << s.agreements << "/" << s.trials << " agreements, " << s.disagreements
        << " disagreements, " << s.unknowns << " unknown, " << s.injected << " injected\n";
    emit(config.output, out.str());

    if (s.disagreements > 0) return kExitNo;
    if (s.unknowns > 0) return kExitUnknown;
    return kExitYes;
}

int run(const CommandConfig& config) {
    if (config.subcommand == "reduce") return run_reduce(config);
    if (config.subcommand == "solve") return run_solve(config);
    if (config.subcommand == "decide") return run_decide(config);
    if (config.subcommand == "verify") return run_verify(config);
    if (config.subcommand == "lemma-check") return run_lemma_check(config);
    if (config.subcommand == "equiv") return run_equiv_command(config);
    throw std::logic_error("unreachable: unknown subcommand");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual-cluster embedding tool: reductions, exact solving, lemma checks"};
    app.require_subcommand(1);
    CommandConfig config;

    const auto add_budget = [&config](CLI::App* cmd) {
        cmd->add_option("--max-states", config.max_states, "search-state budget")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--time-limit", config.time_limit_ms, "time budget in milliseconds");
    };
    const auto add_variant = [&config](CLI::App* cmd) {
        cmd->add_option("--variant", config.variant, "reduction variant")
            ->check(CLI::IsMember({"multi", "two-replica"}));
    };

    CLI::App* reduce = app.add_subcommand("reduce", "reduce a DIMACS CNF to an instance");
    reduce->add_option("input", config.input, "DIMACS CNF file")->required();
    add_variant(reduce);
    reduce->add_option("--instance", config.instance_out, "instance document output path")
        ->required();
    reduce->add_option("--metadata", config.metadata_out, "metadata document output path")
        ->required();
    reduce->add_option("--canonical", config.canonical_out,
                       "also write the canonical embedding (exit 1 when unsatisfiable)");

    CLI::App* solve = app.add_subcommand("solve", "minimize footprint exactly");
    solve->add_option("input", config.input, "instance document")->required();
    solve->add_option("--output", config.output, "result document path (default stdout)");
    add_budget(solve);

    CLI::App* decide = app.add_subcommand("decide", "footprint <= threshold?");
    decide->add_option("input", config.input, "instance document")->required();
    decide->add_option("--threshold", config.threshold, "rational threshold, e.g. 250 or 7/2");
    decide->add_option("--metadata", config.metadata_in,
                       "metadata document to take the threshold from");
    decide->add_option("--output", config.output, "decision document path (default stdout)");
    add_budget(decide);

    CLI::App* verify = app.add_subcommand("verify", "check an embedding against an instance");
    verify->add_option("input", config.input, "instance document")->required();
    verify->add_option("embedding", config.embedding, "embedding document")->required();
    verify->add_option("--threshold", config.threshold, "also check footprint <= threshold");
    verify->add_option("--metadata", config.metadata_in,
                       "metadata document to take the threshold from");
    verify->add_option("--output", config.output, "report path (default stdout)");

    CLI::App* lemma = app.add_subcommand("lemma-check", "exhaustive bandwidth-lemma verification");
    lemma->add_option("--alpha", config.alpha, "clauses per side")
        ->required()
        ->check(CLI::PositiveNumber);
    lemma->add_option("--beta", config.beta, "variable count")
        ->required()
        ->check(CLI::PositiveNumber);
    lemma->add_flag("--extended", config.extended, "check the two-family extended lemma");
    lemma->add_option("--max-sequences", config.max_sequences, "enumeration size guard");
    lemma->add_option("--output", config.output, "report path (default stdout)");

    CLI::App* equiv = app.add_subcommand("equiv", "SAT/embedding equivalence experiment");
    equiv->add_option("--vars", config.vars, "variables per formula (beta)")
        ->required()
        ->check(CLI::PositiveNumber);
    equiv->add_option("--clauses", config.clauses, "clauses per formula (alpha)")
        ->required()
        ->check(CLI::PositiveNumber);
    equiv->add_option("--trials", config.trials, "number of formulas")
        ->required()
        ->check(CLI::PositiveNumber);
    equiv->add_option("--seed", config.seed, "generator seed")->required();
    add_variant(equiv);
    equiv->add_option("--output", config.output, "report path (default stdout)");
    add_budget(equiv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitMalformed;
    }
    config.subcommand = app.get_subcommands().front()->get_name();

    try {
        return run(config);
    } catch (const vce::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    }
}
