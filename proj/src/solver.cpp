#include "vce/solver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace vce::solver {

namespace {

using Clock = std::chrono::steady_clock;

long long uplink_pairs(long long a, long long n) { return a * (n - a); }

void require_valid(const EmbeddingInstance& instance) {
    Validation v = instance.validate();
    if (!v.ok()) throw std::invalid_argument("invalid instance: " + v.violations.front());
}

void require_budget(const SolveBudget& budget) {
    if (budget.max_states < 1) throw std::invalid_argument("max_states must be at least 1");
}

// Branch-and-bound over occupied-server sets. All nodes of the virtual
// cluster are interchangeable (uniform interconnect bandwidth, free chunk
// assignment), so the footprint depends only on WHICH servers are occupied;
// the search enumerates server subsets in ascending id order and assigns
// chunk types afterwards. Node ids are materialized canonically at the end
// (node i on the i-th smallest occupied server).
struct Engine {
    const EmbeddingInstance& inst;

    bool decide_mode = false;           // prune strictly above bound, stop on first hit
    std::optional<Rational> bound;      // decide: threshold; solve: incumbent footprint
    bool stop = false;

    long long max_states = 0;
    std::optional<Clock::time_point> deadline;
    long long states = 0;
    bool exhausted = false;

    int n_V = 0, ns = 0, tau = 0;
    Rational b1, b2;
    bool b1_zero = false, b2_zero = false;

    std::vector<int> servers;                      // server index -> vertex id
    std::vector<std::vector<int>> sdist;           // hop distance between servers
    std::vector<int> cap_child;                    // capacitated edges, as child vertex ids
    std::vector<Rational> cap_value;
    std::vector<std::vector<char>> under;          // [edge][server index]
    std::vector<std::vector<int>> avail;           // [edge][i]: servers with index >= i under edge
    std::vector<std::vector<std::vector<int>>> caps_on_path;  // [i][j] -> capacitated edge indices
    std::vector<char> replica_free;                // hosts no replica of any type
    std::vector<std::vector<int>> smaller_free_siblings;  // replica-free siblings with lower index
    std::vector<std::vector<int>> replica_sidx;    // [type-1] -> replica server indices
    std::vector<std::vector<int>> type_min_dist;   // [type-1][server index] min over replicas
    std::vector<std::vector<int>> type_suffix_min; // [type-1][i] min over servers with index >= i
    std::vector<int> type_order;                   // descending replica spread, then type id

    // mutable search state
    std::vector<int> chosen;                       // ascending server indices
    std::vector<char> in_set;
    std::vector<int> cnt;                          // per capacitated edge
    long long pair_hops = 0;                       // sum of pairwise distances among chosen
    std::vector<int> best_chosen;                  // per type: min access hops into chosen

    std::optional<std::pair<Embedding, CostReport>> best;

    Engine(const EmbeddingInstance& instance, const SolveBudget& budget) : inst(instance) {
        max_states = budget.max_states;
        if (budget.time_limit) deadline = Clock::now() + *budget.time_limit;
        n_V = inst.node_count;
        tau = inst.chunks.type_count();
        b1 = inst.access_bandwidth;
        b2 = inst.interconnect_bandwidth;
        b1_zero = b1.is_zero();
        b2_zero = b2.is_zero();
        prepare();
    }

    void prepare() {
        const SubstrateTree& tree = inst.tree;
        servers = tree.servers();
        ns = static_cast<int>(servers.size());
        std::map<int, int> index_of;
        for (int i = 0; i < ns; ++i) index_of[servers[i]] = i;

        sdist.assign(static_cast<std::size_t>(ns), std::vector<int>(static_cast<std::size_t>(ns), 0));
        for (int i = 0; i < ns; ++i)
            for (int j = i + 1; j < ns; ++j)
                sdist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    sdist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                        dist(tree, servers[static_cast<std::size_t>(i)], servers[static_cast<std::size_t>(j)]);

        std::map<int, int> cap_index;  // child vertex -> capacitated-edge index
        for (int v = 0; v < tree.vertex_count(); ++v) {
            if (v == tree.root() || !tree.capacity(v)) continue;
            cap_index[v] = static_cast<int>(cap_child.size());
            cap_child.push_back(v);
            cap_value.push_back(*tree.capacity(v));
        }
        const std::size_t ne = cap_child.size();

        under.assign(ne, std::vector<char>(static_cast<std::size_t>(ns), 0));
        for (int i = 0; i < ns; ++i) {
            int v = servers[static_cast<std::size_t>(i)];
            while (v != tree.root()) {
                auto it = cap_index.find(v);
                if (it != cap_index.end()) under[static_cast<std::size_t>(it->second)][static_cast<std::size_t>(i)] = 1;
                v = tree.parent(v);
            }
        }
        avail.assign(ne, std::vector<int>(static_cast<std::size_t>(ns) + 1, 0));
        for (std::size_t e = 0; e < ne; ++e)
            for (int i = ns - 1; i >= 0; --i)
                avail[e][static_cast<std::size_t>(i)] =
                    avail[e][static_cast<std::size_t>(i) + 1] + (under[e][static_cast<std::size_t>(i)] ? 1 : 0);

        caps_on_path.assign(static_cast<std::size_t>(ns),
                            std::vector<std::vector<int>>(static_cast<std::size_t>(ns)));
        for (int i = 0; i < ns; ++i) {
            for (int j = 0; j < ns; ++j) {
                if (i == j) continue;
                std::vector<int> edges;
                for (int child : path_edges(tree, servers[static_cast<std::size_t>(i)],
                                            servers[static_cast<std::size_t>(j)])) {
                    auto it = cap_index.find(child);
                    if (it != cap_index.end()) edges.push_back(it->second);
                }
                caps_on_path[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(edges);
            }
        }

        replica_free.assign(static_cast<std::size_t>(ns), 1);
        replica_sidx.assign(static_cast<std::size_t>(tau), {});
        for (int t = 1; t <= tau; ++t) {
            for (int s : inst.chunks.replicas_of(t)) {
                const int si = index_of.at(s);
                replica_free[static_cast<std::size_t>(si)] = 0;
                replica_sidx[static_cast<std::size_t>(t - 1)].push_back(si);
            }
        }

        // Two sibling servers are interchangeable only when both are
        // replica-free AND their uplink edges have equal capacity; distances
        // to every other vertex already coincide for siblings.
        smaller_free_siblings.assign(static_cast<std::size_t>(ns), {});
        for (int i = 0; i < ns; ++i) {
            if (!replica_free[static_cast<std::size_t>(i)]) continue;
            const int self = servers[static_cast<std::size_t>(i)];
            const int parent = tree.parent(self);
            for (int sib : tree.children(parent)) {
                auto it = index_of.find(sib);
                if (it == index_of.end() || it->second >= i) continue;
                if (!replica_free[static_cast<std::size_t>(it->second)]) continue;
                if (tree.capacity(sib) == tree.capacity(self))
                    smaller_free_siblings[static_cast<std::size_t>(i)].push_back(it->second);
            }
        }

        type_min_dist.assign(static_cast<std::size_t>(tau),
                             std::vector<int>(static_cast<std::size_t>(ns), 0));
        type_suffix_min.assign(static_cast<std::size_t>(tau),
                               std::vector<int>(static_cast<std::size_t>(ns) + 1, kInf));
        std::vector<std::pair<int, int>> spread;  // (-max replica distance, type id)
        for (int t = 1; t <= tau; ++t) {
            const auto& reps = replica_sidx[static_cast<std::size_t>(t - 1)];
            for (int i = 0; i < ns; ++i) {
                int m = kInf;
                for (int rs : reps) m = std::min(m, sdist[static_cast<std::size_t>(rs)][static_cast<std::size_t>(i)]);
                type_min_dist[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)] = m;
            }
            for (int i = ns - 1; i >= 0; --i)
                type_suffix_min[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)] =
                    std::min(type_suffix_min[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i) + 1],
                             type_min_dist[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)]);
            int sp = 0;
            for (std::size_t a = 0; a < reps.size(); ++a)
                for (std::size_t b = a + 1; b < reps.size(); ++b)
                    sp = std::max(sp, sdist[static_cast<std::size_t>(reps[a])][static_cast<std::size_t>(reps[b])]);
            spread.push_back({-sp, t});
        }
        std::sort(spread.begin(), spread.end());
        for (const auto& [neg, t] : spread) type_order.push_back(t);

        in_set.assign(static_cast<std::size_t>(ns), 0);
        cnt.assign(ne, 0);
        best_chosen.assign(static_cast<std::size_t>(tau), kInf);
    }

    static constexpr int kInf = 1 << 29;

    bool tick() {
        if (states >= max_states) {
            exhausted = true;
            return false;
        }
        ++states;
        if (deadline && (states & 1023) == 0 && Clock::now() > *deadline) {
            exhausted = true;
            return false;
        }
        return true;
    }

    bool pruned(const Rational& lb) const {
        if (!bound) return false;
        return decide_mode ? lb > *bound : lb >= *bound;
    }

    Rational lower_bound(int next_index) const {
        Rational lb = b2_zero ? Rational(0) : b2 * Rational(pair_hops);
        if (tau > 0 && !b1_zero) {
            long long acc = 0;
            for (int t = 0; t < tau; ++t)
                acc += std::min(best_chosen[static_cast<std::size_t>(t)],
                                type_suffix_min[static_cast<std::size_t>(t)][static_cast<std::size_t>(next_index)]);
            lb += b1 * Rational(acc);
        }
        return lb;
    }

    // No completion of the current prefix can keep interconnect load within
    // capacity on some edge: the subtree count is confined to [lo, hi] and the
    // load a*(n_V-a) is concave, so its minimum sits at an endpoint.
    bool intervals_feasible(int last_index) const {
        if (b2_zero || cap_child.empty()) return true;
        const int remaining = n_V - static_cast<int>(chosen.size());
        const int future_total = ns - last_index - 1;
        for (std::size_t e = 0; e < cap_child.size(); ++e) {
            const int a = avail[e][static_cast<std::size_t>(last_index) + 1];
            const int outside = future_total - a;
            const int lo = cnt[e] + std::max(0, remaining - outside);
            const int hi = cnt[e] + std::min(remaining, a);
            const long long least = std::min(uplink_pairs(lo, n_V), uplink_pairs(hi, n_V));
            if (Rational(least) * b2 > cap_value[e]) return false;
        }
        return true;
    }

    void place(int from) {
        if (stop || exhausted) return;
        if (static_cast<int>(chosen.size()) == n_V) {
            complete();
            return;
        }
        const int needed = n_V - static_cast<int>(chosen.size());
        for (int si = from; si + needed <= ns; ++si) {
            if (stop || exhausted) return;
            if (replica_free[static_cast<std::size_t>(si)]) {
                // A replica-free leaf is interchangeable with its replica-free
                // siblings; only id-order prefixes of such groups are explored.
                bool noncanonical = false;
                for (int sj : smaller_free_siblings[static_cast<std::size_t>(si)]) {
                    if (!in_set[static_cast<std::size_t>(sj)]) {
                        noncanonical = true;
                        break;
                    }
                }
                if (noncanonical) continue;
            }
            if (!tick()) return;

            long long added = 0;
            for (int t : chosen) added += sdist[static_cast<std::size_t>(si)][static_cast<std::size_t>(t)];
            pair_hops += added;
            for (std::size_t e = 0; e < cap_child.size(); ++e)
                if (under[e][static_cast<std::size_t>(si)]) ++cnt[e];
            chosen.push_back(si);
            in_set[static_cast<std::size_t>(si)] = 1;
            std::vector<int> saved_best;
            if (tau > 0) {
                saved_best = best_chosen;
                for (int t = 0; t < tau; ++t)
                    best_chosen[static_cast<std::size_t>(t)] =
                        std::min(best_chosen[static_cast<std::size_t>(t)],
                                 type_min_dist[static_cast<std::size_t>(t)][static_cast<std::size_t>(si)]);
            }

            if (intervals_feasible(si) && !pruned(lower_bound(si + 1))) place(si + 1);

            if (tau > 0) best_chosen = saved_best;
            in_set[static_cast<std::size_t>(si)] = 0;
            chosen.pop_back();
            for (std::size_t e = 0; e < cap_child.size(); ++e)
                if (under[e][static_cast<std::size_t>(si)]) --cnt[e];
            pair_hops -= added;
        }
    }

    // ---- chunk-assignment phase, entered on a complete server set ----

    struct Option {
        int hops;
        int replica;  // replica index within the type
        int sidx;     // occupied server index
        int rsidx;    // replica's server index
    };
    struct TypeSlot {
        int type;
        std::vector<Option> options;
    };
    std::vector<TypeSlot> slots;
    std::vector<long long> suffix_min_hops;
    std::vector<Rational> residual;
    std::vector<Rational> usage;
    std::vector<std::pair<int, int>> picked;  // (replica, sidx) per slot
    Rational interconnect_cost;

    void complete() {
        residual.assign(cap_child.size(), Rational(0));
        for (std::size_t e = 0; e < cap_child.size(); ++e) {
            const Rational load =
                b2_zero ? Rational(0) : Rational(uplink_pairs(cnt[e], n_V)) * b2;
            if (load > cap_value[e]) return;
            residual[e] = cap_value[e] - load;
        }
        interconnect_cost = b2_zero ? Rational(0) : b2 * Rational(pair_hops);

        slots.clear();
        slots.reserve(static_cast<std::size_t>(tau));
        for (int t : type_order) {
            TypeSlot slot;
            slot.type = t;
            const auto& reps = replica_sidx[static_cast<std::size_t>(t - 1)];
            for (std::size_t ri = 0; ri < reps.size(); ++ri)
                for (int os : chosen)
                    slot.options.push_back({sdist[static_cast<std::size_t>(reps[ri])][static_cast<std::size_t>(os)],
                                            static_cast<int>(ri), os, reps[ri]});
            std::sort(slot.options.begin(), slot.options.end(), [](const Option& a, const Option& b) {
                return std::tie(a.hops, a.replica, a.sidx) < std::tie(b.hops, b.replica, b.sidx);
            });
            slots.push_back(std::move(slot));
        }
        suffix_min_hops.assign(static_cast<std::size_t>(tau) + 1, 0);
        for (int d = tau - 1; d >= 0; --d)
            suffix_min_hops[static_cast<std::size_t>(d)] =
                suffix_min_hops[static_cast<std::size_t>(d) + 1] +
                slots[static_cast<std::size_t>(d)].options.front().hops;

        usage.assign(cap_child.size(), Rational(0));
        picked.assign(static_cast<std::size_t>(tau), {-1, -1});
        assign(0, 0);
    }

    Rational total_cost(long long acc_hops) const {
        if (b1_zero || acc_hops == 0) return interconnect_cost;
        return interconnect_cost + b1 * Rational(acc_hops);
    }

    void assign(int depth, long long acc_hops) {
        if (stop || exhausted) return;
        if (depth == tau) {
            accept(acc_hops);
            return;
        }
        const TypeSlot& slot = slots[static_cast<std::size_t>(depth)];
        for (const Option& opt : slot.options) {
            if (stop || exhausted) return;
            if (!tick()) return;
            const long long lb_hops =
                acc_hops + opt.hops + suffix_min_hops[static_cast<std::size_t>(depth) + 1];
            if (pruned(total_cost(lb_hops))) break;  // options sorted by hops: the rest only cost more
            bool fits = true;
            if (!b1_zero && opt.hops > 0) {
                for (int e : caps_on_path[static_cast<std::size_t>(opt.rsidx)][static_cast<std::size_t>(opt.sidx)]) {
                    if (usage[static_cast<std::size_t>(e)] + b1 > residual[static_cast<std::size_t>(e)]) {
                        fits = false;
                        break;
                    }
                }
            }
            if (!fits) continue;
            picked[static_cast<std::size_t>(depth)] = {opt.replica, opt.sidx};
            if (!b1_zero && opt.hops > 0)
                for (int e : caps_on_path[static_cast<std::size_t>(opt.rsidx)][static_cast<std::size_t>(opt.sidx)])
                    usage[static_cast<std::size_t>(e)] += b1;
            assign(depth + 1, acc_hops + opt.hops);
            if (!b1_zero && opt.hops > 0)
                for (int e : caps_on_path[static_cast<std::size_t>(opt.rsidx)][static_cast<std::size_t>(opt.sidx)])
                    usage[static_cast<std::size_t>(e)] -= b1;
        }
    }

    void accept(long long acc_hops) {
        const Rational total = total_cost(acc_hops);
        if (pruned(total)) return;
        Embedding emb;
        emb.placement.reserve(static_cast<std::size_t>(n_V));
        for (int si : chosen) emb.placement.push_back(servers[static_cast<std::size_t>(si)]);
        for (int d = 0; d < tau; ++d) {
            const auto [replica, sidx] = picked[static_cast<std::size_t>(d)];
            const auto it = std::lower_bound(chosen.begin(), chosen.end(), sidx);
            emb.assignment[slots[static_cast<std::size_t>(d)].type] = {
                replica, static_cast<int>(it - chosen.begin())};
        }
        best = {emb, cost(inst, emb)};
        if (decide_mode)
            stop = true;
        else
            bound = best->second.footprint;
    }

    void run() { place(0); }
};

}  // namespace

SolveResult solve_greedy(const EmbeddingInstance& instance) {
    require_valid(instance);
    const SubstrateTree& tree = instance.tree;
    const int tau = instance.chunks.type_count();
    SolveResult out;  // budget_exhausted unless a feasible embedding materializes

    std::set<int> used;
    std::vector<int> placement;
    std::map<int, ChunkAssignment> assignment;

    for (int t = 1; t <= tau; ++t) {
        ++out.explored;
        if (static_cast<int>(placement.size()) >= instance.node_count) return out;  // types exceed nodes
        const auto& reps = instance.chunks.replicas_of(t);
        int pick = -1;
        for (std::size_t ri = 0; ri < reps.size(); ++ri) {
            if (!used.count(reps[ri])) {
                pick = static_cast<int>(ri);
                break;
            }
        }
        if (pick < 0) return out;  // every replica server already committed
        assignment[t] = {pick, static_cast<int>(placement.size())};
        used.insert(reps[static_cast<std::size_t>(pick)]);
        placement.push_back(reps[static_cast<std::size_t>(pick)]);
    }

    auto within_caps_with = [&](int candidate) {
        if (instance.interconnect_bandwidth.is_zero()) return true;
        for (int v = 0; v < tree.vertex_count(); ++v) {
            if (v == tree.root() || !tree.capacity(v)) continue;
            long long m = 0;
            for (int s : placement) {
                int walk = s;
                while (walk != tree.root() && walk != v) walk = tree.parent(walk);
                if (walk == v) ++m;
            }
            int walk = candidate;
            while (walk != tree.root() && walk != v) walk = tree.parent(walk);
            if (walk == v) ++m;
            const Rational load =
                Rational(m * (instance.node_count - m)) * instance.interconnect_bandwidth;
            if (load > *tree.capacity(v)) return false;
        }
        return true;
    };

    while (static_cast<int>(placement.size()) < instance.node_count) {
        ++out.explored;
        int best_server = -1;
        long long best_marginal = 0;
        bool best_filtered = false;
        for (int s : tree.servers()) {
            if (used.count(s)) continue;
            long long marginal = 0;
            for (int p : placement) marginal += dist(tree, s, p);
            const bool filtered = within_caps_with(s);
            const bool better =
                best_server < 0 || (filtered && !best_filtered) ||
                (filtered == best_filtered && marginal < best_marginal);
            if (better) {
                best_server = s;
                best_marginal = marginal;
                best_filtered = filtered;
            }
        }
        if (best_server < 0) return out;  // no free server left for an idle node
        used.insert(best_server);
        placement.push_back(best_server);
    }

    Embedding emb{std::move(placement), std::move(assignment)};
    if (!validate_embedding(instance, emb).ok()) return out;
    if (!feasible(instance, emb).ok()) return out;
    CostReport report = cost(instance, emb);
    out.best = {std::move(emb), std::move(report)};
    return out;
}

SolveResult solve_exact(const EmbeddingInstance& instance, const SolveBudget& budget) {
    require_valid(instance);
    require_budget(budget);
    Engine engine(instance, budget);
    SolveResult seed = solve_greedy(instance);
    if (seed.best) {
        engine.bound = seed.best->second.footprint;
        engine.best = seed.best;
    }
    engine.run();
    SolveResult out;
    out.explored = engine.states;
    out.best = engine.best;
    if (engine.exhausted)
        out.status = SolveStatus::budget_exhausted;
    else
        out.status = engine.best ? SolveStatus::optimal : SolveStatus::infeasible;
    return out;
}

DecideResult decide_with_witness(const EmbeddingInstance& instance, const Rational& threshold,
                                 const SolveBudget& budget) {
    require_valid(instance);
    require_budget(budget);
    if (threshold < Rational(0)) throw std::invalid_argument("threshold must be non-negative");
    DecideResult out;
    SolveResult seed = solve_greedy(instance);
    if (seed.best && seed.best->second.footprint <= threshold) {
        out.verdict = Verdict::yes;
        out.witness = seed.best;
        return out;
    }
    Engine engine(instance, budget);
    engine.decide_mode = true;
    engine.bound = threshold;
    engine.run();
    out.explored = engine.states;
    if (engine.best) {
        out.verdict = Verdict::yes;
        out.witness = engine.best;
    } else if (engine.exhausted) {
        out.verdict = Verdict::unknown;
    } else {
        out.verdict = Verdict::no;
    }
    return out;
}

Verdict decide(const EmbeddingInstance& instance, const Rational& threshold, const SolveBudget& budget) {
    return decide_with_witness(instance, threshold, budget).verdict;
}

}  // namespace vce::solver
