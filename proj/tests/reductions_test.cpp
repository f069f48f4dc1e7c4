#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>
#include <vector>

#include "vce/model.hpp"
#include "vce/reductions.hpp"
#include "vce/sat.hpp"
#include "vce/solver.hpp"

using namespace vce;
using namespace vce::reductions;
using vce::sat::CnfFormula;
using vce::sat::Valuation;

namespace {

// (x1 | x2) & (~x1 | x3) over five variables: alpha = 2, beta = 5.
CnfFormula psi25() {
    return CnfFormula(5, {{{1, true}, {2, true}}, {{1, false}, {3, true}}});
}

// (x1 | ~x2 | x3) over four variables: alpha = 1, beta = 4, exact-3.
CnfFormula psi14() { return CnfFormula(4, {{{1, true}, {2, false}, {3, true}}}); }

Valuation total(const std::vector<int>& bits) {
    Valuation val;
    for (std::size_t i = 0; i < bits.size(); ++i)
        val.assignment[static_cast<int>(i) + 1] = bits[i];
    return val;
}

}  // namespace

TEST_CASE("multi-replica construction at alpha=2 beta=5") {
    const ReductionArtifacts art = reduce_multi(psi25());
    CHECK(art.variant == Variant::multi_replica);
    CHECK(art.alpha == 2);
    CHECK(art.beta == 5);
    CHECK(art.instance.validate().ok());

    CHECK(art.instance.tree.vertex_count() == 36);  // 1 + beta * (3 + 2 * alpha)
    CHECK(art.instance.node_count == 10);           // alpha * beta
    CHECK(art.instance.interconnect_bandwidth == Rational(1));
    CHECK(art.threshold == Rational(250));
    CHECK(art.instance.access_bandwidth == Rational(251));  // threshold + 1
    CHECK(art.closed_form == Rational(90));

    // Uplink capacity alpha*(alpha*beta - alpha) = 16 on every variable-gadget
    // root edge, and nowhere else.
    REQUIRE(art.variable_gadgets.size() == 5);
    std::set<int> uplink_edges;
    for (const VariableGadget& g : art.variable_gadgets) {
        REQUIRE(art.instance.tree.capacity(g.root).has_value());
        CHECK(*art.instance.tree.capacity(g.root) == Rational(16));
        uplink_edges.insert(g.root);
    }
    for (int v = 1; v < art.instance.tree.vertex_count(); ++v)
        if (!uplink_edges.count(v)) CHECK_FALSE(art.instance.tree.capacity(v).has_value());

    // Gadget blocks are laid out contiguously from vertex 1.
    const VariableGadget& g1 = art.variable_gadgets[0];
    CHECK(g1.root == 1);
    CHECK(g1.positive == 2);
    CHECK(g1.positive_leaves == std::vector<int>{3, 4});
    CHECK(g1.negative == 5);
    CHECK(g1.negative_leaves == std::vector<int>{6, 7});
    CHECK(art.label_map.at(3) == "x1@c1");
    CHECK(art.label_map.at(4) == "x1@c2");
    CHECK(art.label_map.at(7) == "~x1@c2");

    // Chunk replicas sit on the satisfying literals' slot-c leaves, ascending.
    REQUIRE(art.instance.chunks.type_count() == 2);
    CHECK(art.instance.chunks.replicas_of(1) == std::vector<int>{3, 10});
    CHECK(art.instance.chunks.replicas_of(2) == std::vector<int>{7, 18});
    CHECK(art.chunk_map.at(1).clause == 1);
    CHECK_FALSE(art.chunk_map.at(1).slot.has_value());
    CHECK(art.clause_gadgets.empty());
}

TEST_CASE("multi-replica construction at alpha=3 beta=4") {
    const CnfFormula psi(4, {{{1, true}, {2, true}}, {{2, false}, {3, true}}, {{4, true}}});
    const ReductionArtifacts art = reduce_multi(psi);
    CHECK(art.instance.tree.vertex_count() == 37);
    CHECK(art.instance.node_count == 12);
    CHECK(*art.instance.tree.capacity(art.variable_gadgets[0].root) == Rational(27));
    CHECK(art.threshold == Rational(348));
    CHECK(art.closed_form == Rational(132));
    CHECK(compute_threshold(art) == art.threshold);
}

TEST_CASE("two-replica construction at alpha=1 beta=4") {
    const ReductionArtifacts art = reduce_two_replica(psi14());
    CHECK(art.variant == Variant::two_replica);
    CHECK(art.instance.validate().ok());
    CHECK(art.instance.tree.vertex_count() == 26);  // 1 + 4*5 + 5
    CHECK(art.instance.node_count == 6);            // alpha*beta + 2*alpha
    CHECK(art.threshold == Rational(86));
    CHECK(art.instance.access_bandwidth == Rational(87));

    REQUIRE(art.clause_gadgets.size() == 1);
    const ClauseGadget& cg = art.clause_gadgets[0];
    CHECK(cg.root == 21);
    CHECK(cg.middle == 22);
    CHECK(cg.leaves == std::vector<int>{23, 24, 25});
    CHECK(art.label_map.at(23) == "C1#1");
    CHECK(art.label_map.at(25) == "C1#3");

    // Variable uplink alpha*(alpha*(beta-1)+2*alpha) = 5; clause uplink
    // 2*(alpha*beta+2*(alpha-1)) = 8.
    CHECK(*art.instance.tree.capacity(art.variable_gadgets[0].root) == Rational(5));
    CHECK(*art.instance.tree.capacity(cg.root) == Rational(8));

    // Three chunk types, two replicas each: variable leaf then clause leaf.
    REQUIRE(art.instance.chunks.type_count() == 3);
    CHECK(art.instance.chunks.replicas_of(1) == std::vector<int>{3, 23});
    CHECK(art.instance.chunks.replicas_of(2) == std::vector<int>{10, 24});
    CHECK(art.instance.chunks.replicas_of(3) == std::vector<int>{13, 25});
    CHECK(art.chunk_map.at(2).clause == 1);
    CHECK(art.chunk_map.at(2).slot == 2);
}

TEST_CASE("two-replica construction at alpha=2 beta=5") {
    const CnfFormula psi(5, {{{1, true}, {2, true}, {3, true}},
                             {{1, false}, {4, true}, {5, true}}});
    const ReductionArtifacts art = reduce_two_replica(psi);
    CHECK(art.instance.tree.vertex_count() == 46);
    CHECK(art.instance.node_count == 14);
    CHECK(art.threshold == Rational(518));
    CHECK(*art.instance.tree.capacity(art.variable_gadgets[0].root) == Rational(24));
    CHECK(*art.instance.tree.capacity(art.clause_gadgets[0].root) == Rational(24));
    CHECK(art.instance.chunks.type_count() == 6);
    CHECK(compute_threshold(art) == art.threshold);
}

TEST_CASE("constructions reject unusable formulas") {
    CHECK_THROWS_AS(reduce_multi(CnfFormula(3, {{{1, true}}})), std::invalid_argument);
    CHECK_THROWS_AS(reduce_multi(CnfFormula(5, {})), std::invalid_argument);
    // Width-2 clause is not exact-3.
    CHECK_THROWS_AS(reduce_two_replica(CnfFormula(5, {{{1, true}, {2, true}}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(reduce_two_replica(CnfFormula(3, {{{1, true}, {2, false}, {3, true}}})),
                    std::invalid_argument);
}

TEST_CASE("closed form threshold is the recorded formula") {
    CHECK(closed_form_threshold(Variant::multi_replica, 2, 5) == Rational(90));
    CHECK(closed_form_threshold(Variant::multi_replica, 3, 4) == Rational(132));
    CHECK(closed_form_threshold(Variant::multi_replica, 1, 4) == Rational(12));
    CHECK_THROWS_AS(closed_form_threshold(Variant::two_replica, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_threshold(Variant::multi_replica, 0, 5), std::invalid_argument);

    // The derived threshold disagrees with the closed form; both are kept.
    const ReductionArtifacts art = reduce_multi(psi25());
    CHECK(art.threshold == Rational(250));
    CHECK(*art.closed_form == Rational(90));
    CHECK(art.threshold != *art.closed_form);
}

TEST_CASE("canonical embedding is feasible and costs exactly the threshold") {
    const ReductionArtifacts art = reduce_multi(psi25());
    for (const std::vector<int>& bits :
         {std::vector<int>{1, 1, 1, 0, 0}, std::vector<int>{1, 0, 1, 1, 1},
          std::vector<int>{0, 1, 0, 0, 0}, std::vector<int>{0, 1, 1, 1, 1}}) {
        const Embedding emb = canonical_embedding(art, total(bits));
        CHECK(validate_embedding(art.instance, emb).ok());
        CHECK(feasible(art.instance, emb).ok());
        CHECK(cost(art.instance, emb).footprint == art.threshold);
    }
}

TEST_CASE("canonical embedding places selected sides and collocates chunks") {
    const ReductionArtifacts art = reduce_two_replica(psi14());
    // x1 = 1 satisfies slot 1, so the clause gadget keeps leaves 2 and 3.
    const Embedding emb = canonical_embedding(art, total({1, 1, 0, 0}));
    CHECK(emb.placement == std::vector<int>{3, 8, 15, 20, 24, 25});
    CHECK(emb.assignment.at(1) == ChunkAssignment{0, 0});  // on variable leaf 3
    CHECK(emb.assignment.at(2) == ChunkAssignment{1, 4});  // on clause leaf 24
    CHECK(emb.assignment.at(3) == ChunkAssignment{1, 5});  // on clause leaf 25
    CHECK(cost(art.instance, emb).footprint == Rational(86));
    CHECK(feasible(art.instance, emb).ok());
}

TEST_CASE("canonical embedding rejects bad valuations") {
    const ReductionArtifacts art = reduce_multi(psi25());
    CHECK_THROWS_AS(canonical_embedding(art, total({0, 0, 1, 0, 0})),  // falsifies clause 1
                    std::invalid_argument);
    Valuation partial;
    partial.assignment = {{1, 1}, {2, 1}};
    CHECK_THROWS_AS(canonical_embedding(art, partial), std::invalid_argument);
}

TEST_CASE("extract_valuation inverts canonical embeddings") {
    for (const ReductionArtifacts& art : {reduce_multi(psi25()), reduce_two_replica(psi14())}) {
        const auto val = sat::solve_sat(art.formula);
        REQUIRE(val.has_value());
        const Embedding emb = canonical_embedding(art, *val);
        const Valuation back = extract_valuation(art, emb);
        CHECK(sat::eval(art.formula, back) == sat::EvalOutcome::satisfied);
        for (int v = 1; v <= art.beta; ++v) CHECK(back.at(v) == val->at(v));
    }
}

TEST_CASE("extract_valuation rejects embeddings that break the contract") {
    const ReductionArtifacts art = reduce_multi(psi25());
    Embedding emb = canonical_embedding(art, total({1, 1, 1, 1, 1}));

    Embedding wrong = emb;
    wrong.placement.pop_back();  // wrong node count
    CHECK_THROWS_AS(extract_valuation(art, wrong), std::invalid_argument);

    // Piling a third node into gadget 1 overloads its uplink (3*7 = 21 > 16),
    // so feasibility fails before any threshold comparison.
    Embedding shifted = emb;
    for (int& server : shifted.placement)
        if (server == 11) server = 6;  // x2's slot-2 leaf moves onto ~x1's first leaf
    CHECK_THROWS_AS(extract_valuation(art, shifted), std::invalid_argument);
}

TEST_CASE("solve_exact lands exactly on the threshold for satisfiable formulas") {
    const ReductionArtifacts art = reduce_multi(psi25());
    const solver::SolveResult res = solver::solve_exact(art.instance);
    REQUIRE(res.status == solver::SolveStatus::optimal);
    CHECK(res.best->second.footprint == art.threshold);
    const Valuation val = extract_valuation(art, res.best->first);
    CHECK(sat::eval(art.formula, val) == sat::EvalOutcome::satisfied);
}

TEST_CASE("unsatisfiable formulas price strictly above the threshold") {
    const CnfFormula contra(4, {{{1, true}}, {{1, false}}});
    const ReductionArtifacts art = reduce_multi(contra);
    CHECK(solver::decide(art.instance, art.threshold) == solver::Verdict::no);
    const solver::SolveResult res = solver::solve_exact(art.instance);
    REQUIRE(res.status == solver::SolveStatus::optimal);
    CHECK(res.best->second.footprint > art.threshold);

    // Two-replica: the optimum of a satisfiable instance is the threshold, so
    // asking for strictly less is refused.
    const ReductionArtifacts two = reduce_two_replica(psi14());
    CHECK(solver::decide(two.instance, two.threshold) == solver::Verdict::yes);
    CHECK(solver::decide(two.instance, two.threshold - Rational(1)) == solver::Verdict::no);
}
