#ifndef MOEC_MOEA_HPP
#define MOEC_MOEA_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/encoding.hpp"
#include "moec/init.hpp"
#include "moec/objectives.hpp"
#include "moec/rng.hpp"

namespace moec {

struct Individual {
    Genotype genotype;
    ObjectivePair obj;
    Partition part;
    int rank = 0;
    double crowding = 0.0;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::string algorithm;
    std::vector<std::pair<std::string, std::string>> params;

    void set(const std::string& key, const std::string& value) { params.push_back({key, value}); }
};

// Mutually non-dominated solutions returned by one run.
struct ApproximationSet {
    std::vector<Individual> members;
    RunMeta run_meta;
};

// Pareto dominance for minimization.
inline bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    if (a.compactness > b.compactness || a.connectedness > b.connectedness) return false;
    return a.compactness < b.compactness || a.connectedness < b.connectedness;
}

// Deb's fast non-dominated sort; fills each individual's rank.
inline std::vector<std::vector<std::size_t>> nondominated_sort(std::vector<Individual>& pop) {
    if (pop.empty()) throw std::invalid_argument("nondominated_sort: empty population");
    const std::size_t m = pop.size();
    std::vector<std::vector<std::size_t>> dominated(m);
    std::vector<int> dom_count(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            if (dominates(pop[i].obj, pop[j].obj)) {
                dominated[i].push_back(j);
                ++dom_count[j];
            } else if (dominates(pop[j].obj, pop[i].obj)) {
                dominated[j].push_back(i);
                ++dom_count[i];
            }
        }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < m; ++i)
        if (dom_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        for (std::size_t i : current) pop[i].rank = static_cast<int>(fronts.size());
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated[i])
                if (--dom_count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

// Standard crowding distance: per objective, boundary members are infinite
// and interior ones accumulate normalized neighbor gaps. Fills the crowding
// field and returns the values in front order.
inline std::vector<double> crowding_distance(const std::vector<std::size_t>& front,
                                             std::vector<Individual>& pop) {
    if (front.empty()) throw std::invalid_argument("crowding_distance: empty front");
    const std::size_t f = front.size();
    std::vector<double> dist(f, 0.0);
    const double inf = std::numeric_limits<double>::infinity();

    for (int objective = 0; objective < 2; ++objective) {
        auto value = [&](std::size_t idx) {
            return objective == 0 ? pop[idx].obj.compactness : pop[idx].obj.connectedness;
        };
        std::vector<std::size_t> order(f);
        for (std::size_t i = 0; i < f; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            double va = value(front[a]), vb = value(front[b]);
            if (va != vb) return va < vb;
            return front[a] < front[b];
        });
        double range = value(front[order[f - 1]]) - value(front[order[0]]);
        dist[order[0]] = inf;
        dist[order[f - 1]] = inf;
        if (range <= 0.0) continue; // zero-range objective contributes nothing
        for (std::size_t i = 1; i + 1 < f; ++i) {
            if (dist[order[i]] == inf) continue;
            dist[order[i]] += (value(front[order[i + 1]]) - value(front[order[i - 1]])) / range;
        }
    }
    for (std::size_t i = 0; i < f; ++i) pop[front[i]].crowding = dist[i];
    return dist;
}

// Each gene comes from parent a or b with equal probability ("heads" takes a).
template <typename RngT>
Genotype uniform_crossover(const Genotype& a, const Genotype& b, RngT& rng) {
    if (a.kind != b.kind || a.length() != b.length())
        throw std::invalid_argument("uniform_crossover: incompatible parents");
    Genotype child = a;
    for (int i = 0; i < child.length(); ++i)
        if (!rng.bernoulli(0.5)) child.genes[i] = b.genes[i];
    return child;
}

// Run-wide invocation counter, used by tests to prove an algorithm never
// mutates (MOCLE must not).
inline long& mutation_call_count() {
    static long count = 0;
    return count;
}

// Mutated genes stay inside the neighborhood bias: a locus gene may point at
// one of its point's L nearest neighbors or at itself; a delta-locus gene may
// flip between intact and removed, plus neighborhood redirection when enabled.
template <typename RngT>
Genotype neighborhood_mutation(const Genotype& g, const NeighborTable& nn, int L, double rate,
                               RngT& rng, bool delta_redirect = true) {
    ++mutation_call_count();
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("neighborhood_mutation: bad rate");
    if (L > nn.l_max) throw std::invalid_argument("neighborhood_mutation: L exceeds table depth");
    Genotype out = g;
    if (g.kind == GenotypeKind::Locus) {
        for (int i = 0; i < out.length(); ++i) {
            if (!rng.bernoulli(rate)) continue;
            std::size_t pick = rng.next_index(static_cast<std::size_t>(L) + 1);
            out.genes[i] = pick == static_cast<std::size_t>(L) ? i : nn.row(i)[pick];
        }
    } else {
        const MstModel& mst = *g.context;
        for (int idx = 0; idx < out.length(); ++idx) {
            if (!rng.bernoulli(rate)) continue;
            int child = mst.gamma[idx];
            if (delta_redirect) {
                // domain: original target, self-link, or one of child's L neighbors
                std::size_t pick = rng.next_index(static_cast<std::size_t>(L) + 2);
                if (pick == 0)
                    out.genes[idx] = mst.parent[child];
                else if (pick == 1)
                    out.genes[idx] = child;
                else
                    out.genes[idx] = nn.row(child)[pick - 2];
            } else {
                out.genes[idx] = rng.bernoulli(0.5) ? mst.parent[child] : child;
            }
        }
    }
    return out;
}

struct VariationOps {
    double crossover_prob = 0.7;
    double mutation_rate = -1.0; // <0 means 1/genotype-length
    const NeighborTable* nn = nullptr;
    int L = 10;
    bool delta_redirect = true;

    double rate_for(const Genotype& g) const {
        return mutation_rate >= 0.0 ? mutation_rate : 1.0 / std::max(1, g.length());
    }
};

struct Evaluated {
    ObjectivePair obj;
    Partition part;
};

using EvalFn = std::function<Evaluated(const Genotype&)>;

// Optional per-generation observer. For NSGA-II, `pool` is the combined
// parent+offspring population (ranks filled) and `selected` the survivors;
// for PESA-II both views are the archive. Generation 0 passes the evaluated
// initial population.
using GenerationHook =
    std::function<void(int, const std::vector<Individual>&, const std::vector<Individual>&)>;

namespace detail {

inline std::size_t tournament_pick(const std::vector<Individual>& pop, Rng& rng) {
    std::size_t a = rng.next_index(pop.size());
    std::size_t b = rng.next_index(pop.size());
    const Individual &ia = pop[a], &ib = pop[b];
    if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
    if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
    return std::min(a, b); // deterministic tie
}

inline void pad_population(std::vector<Genotype>& gs, std::size_t target) {
    if (gs.empty()) throw std::invalid_argument("pad_population: empty initial population");
    std::size_t i = 0;
    while (gs.size() < target) gs.push_back(gs[i++ % gs.size()]);
    if (gs.size() > target) gs.resize(target);
}

inline std::vector<Individual> collect_front0(const std::vector<Individual>& pop) {
    std::vector<Individual> out;
    for (const auto& ind : pop)
        if (ind.rank == 0) out.push_back(ind);
    return out;
}

} // namespace detail

// NSGA-II: binary tournament on (rank, crowding), uniform crossover,
// neighborhood mutation, elitist (rank, crowding) environmental selection.
// Returns the final population's first front.
inline ApproximationSet run_nsga2(const InitialPopulation& init, const EvalFn& eval,
                                  const VariationOps& ops, int generations, int pop_size, Rng& rng,
                                  const GenerationHook& hook = nullptr) {
    if (generations < 0) throw std::invalid_argument("run_nsga2: negative generations");
    std::vector<Genotype> genos = init.genotypes;
    detail::pad_population(genos, static_cast<std::size_t>(pop_size));

    std::vector<Individual> pop;
    pop.reserve(genos.size() * 2);
    for (auto& g : genos) {
        auto ev = eval(g);
        pop.push_back({std::move(g), ev.obj, std::move(ev.part), 0, 0.0});
    }
    {
        auto fronts = nondominated_sort(pop);
        for (auto& f : fronts) crowding_distance(f, pop);
    }
    if (hook) hook(0, pop, pop);

    for (int gen = 1; gen <= generations; ++gen) {
        std::vector<Individual> offspring;
        offspring.reserve(pop.size());
        while (offspring.size() < static_cast<std::size_t>(pop_size)) {
            const Genotype& pa = pop[detail::tournament_pick(pop, rng)].genotype;
            const Genotype& pb = pop[detail::tournament_pick(pop, rng)].genotype;
            Genotype child = rng.bernoulli(ops.crossover_prob) ? uniform_crossover(pa, pb, rng) : pa;
            child = neighborhood_mutation(child, *ops.nn, ops.L, ops.rate_for(child), rng,
                                          ops.delta_redirect);
            auto ev = eval(child);
            offspring.push_back({std::move(child), ev.obj, std::move(ev.part), 0, 0.0});
        }

        // elitist truncation of the combined pool
        std::vector<Individual> pool = std::move(pop);
        for (auto& ind : offspring) pool.push_back(std::move(ind));
        auto fronts = nondominated_sort(pool);
        for (auto& f : fronts) crowding_distance(f, pool);

        std::vector<Individual> next;
        next.reserve(pop_size);
        for (auto& front : fronts) {
            if (next.size() + front.size() <= static_cast<std::size_t>(pop_size)) {
                for (auto i : front) next.push_back(pool[i]);
            } else {
                std::vector<std::size_t> order = front;
                std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                    if (pool[x].crowding != pool[y].crowding)
                        return pool[x].crowding > pool[y].crowding;
                    return x < y;
                });
                for (std::size_t i = 0; next.size() < static_cast<std::size_t>(pop_size); ++i)
                    next.push_back(pool[order[i]]);
            }
            if (next.size() == static_cast<std::size_t>(pop_size)) break;
        }
        if (hook) hook(gen, pool, next);
        pop = std::move(next);
        {
            auto fr = nondominated_sort(pop);
            for (auto& f : fr) crowding_distance(f, pop);
        }
    }

    ApproximationSet result;
    result.members = detail::collect_front0(pop);
    return result;
}

// Objective-space hypergrid used by the PESA-II archive.
struct HyperGrid {
    double lo[2] = {0, 0}, hi[2] = {0, 0};
    int divisions = 8;
    std::vector<int> occupancy;

    void rebuild(const std::vector<Individual>& archive) {
        lo[0] = lo[1] = std::numeric_limits<double>::infinity();
        hi[0] = hi[1] = -std::numeric_limits<double>::infinity();
        for (const auto& ind : archive) {
            lo[0] = std::min(lo[0], ind.obj.compactness);
            hi[0] = std::max(hi[0], ind.obj.compactness);
            lo[1] = std::min(lo[1], ind.obj.connectedness);
            hi[1] = std::max(hi[1], ind.obj.connectedness);
        }
        occupancy.assign(static_cast<std::size_t>(divisions) * divisions, 0);
        for (const auto& ind : archive) ++occupancy[cell_of(ind.obj)];
    }

    int axis_cell(double v, int axis) const {
        double range = hi[axis] - lo[axis];
        if (range <= 0.0) return 0; // zero-range objective: everyone in cell 0
        int c = static_cast<int>((v - lo[axis]) / range * divisions);
        return std::clamp(c, 0, divisions - 1);
    }

    std::size_t cell_of(const ObjectivePair& o) const {
        return static_cast<std::size_t>(axis_cell(o.compactness, 0)) * divisions +
               axis_cell(o.connectedness, 1);
    }
};

// PESA-II: small internal population, external non-dominated archive with
// hypergrid crowding control, region-based parent selection.
inline ApproximationSet run_pesa2(const InitialPopulation& init, const EvalFn& eval,
                                  const VariationOps& ops, int generations, int internal_size,
                                  int archive_cap, int grid_divisions, Rng& rng,
                                  const GenerationHook& hook = nullptr) {
    if (archive_cap < 1) throw std::invalid_argument("run_pesa2: archive_cap must be >= 1");
    if (grid_divisions < 1) throw std::invalid_argument("run_pesa2: grid_divisions must be >= 1");

    std::vector<Individual> archive;
    HyperGrid grid;
    grid.divisions = grid_divisions;

    auto archive_insert = [&](Individual&& cand) {
        for (const auto& a : archive)
            if (dominates(a.obj, cand.obj) ||
                (a.obj.compactness == cand.obj.compactness &&
                 a.obj.connectedness == cand.obj.connectedness))
                return; // dominated or an exact duplicate vector

        std::size_t keep = 0;
        for (std::size_t i = 0; i < archive.size(); ++i)
            if (!dominates(cand.obj, archive[i].obj)) {
                if (keep != i) archive[keep] = std::move(archive[i]);
                ++keep;
            }
        archive.resize(keep);
        archive.push_back(std::move(cand));
        if (archive.size() > static_cast<std::size_t>(archive_cap)) {
            grid.rebuild(archive);
            std::size_t worst_cell = 0;
            for (std::size_t c = 1; c < grid.occupancy.size(); ++c)
                if (grid.occupancy[c] > grid.occupancy[worst_cell]) worst_cell = c;
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < archive.size(); ++i)
                if (grid.cell_of(archive[i].obj) == worst_cell) members.push_back(i);
            std::size_t evict = members[rng.next_index(members.size())];
            archive.erase(archive.begin() + static_cast<long>(evict));
        }
    };

    auto select_parent = [&]() -> const Genotype& {
        grid.rebuild(archive);
        std::vector<std::size_t> occupied;
        for (std::size_t c = 0; c < grid.occupancy.size(); ++c)
            if (grid.occupancy[c] > 0) occupied.push_back(c);
        std::size_t ca = occupied[rng.next_index(occupied.size())];
        std::size_t cb = occupied[rng.next_index(occupied.size())];
        std::size_t cell = grid.occupancy[ca] < grid.occupancy[cb]   ? ca
                           : grid.occupancy[cb] < grid.occupancy[ca] ? cb
                                                                     : std::min(ca, cb);
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < archive.size(); ++i)
            if (grid.cell_of(archive[i].obj) == cell) members.push_back(i);
        return archive[members[rng.next_index(members.size())]].genotype;
    };

    for (const auto& g : init.genotypes) {
        auto ev = eval(g);
        archive_insert({g, ev.obj, std::move(ev.part), 0, 0.0});
    }
    if (hook) hook(0, archive, archive);

    for (int gen = 1; gen <= generations; ++gen) {
        std::vector<Genotype> internal;
        internal.reserve(internal_size);
        for (int i = 0; i < internal_size; ++i) {
            const Genotype& pa = select_parent();
            const Genotype& pb = select_parent();
            Genotype child = rng.bernoulli(ops.crossover_prob) ? uniform_crossover(pa, pb, rng) : pa;
            internal.push_back(neighborhood_mutation(child, *ops.nn, ops.L, ops.rate_for(child),
                                                     rng, ops.delta_redirect));
        }
        for (auto& g : internal) {
            auto ev = eval(g);
            archive_insert({std::move(g), ev.obj, std::move(ev.part), 0, 0.0});
        }
        if (hook) hook(gen, archive, archive);
    }

    ApproximationSet result;
    result.members = archive;
    return result;
}

// Per-generation trace row: generation, front-0 size, objective extremes.
inline GenerationHook trace_to_stream(std::ostream& os) {
    os << "generation,front0,compactness_min,compactness_max,connectedness_min,connectedness_max\n";
    return [&os](int gen, const std::vector<Individual>&, const std::vector<Individual>& pop) {
        std::size_t f0 = 0;
        double clo = std::numeric_limits<double>::infinity(), chi = -clo;
        double nlo = clo, nhi = -clo;
        for (const auto& ind : pop) {
            if (ind.rank == 0) ++f0;
            clo = std::min(clo, ind.obj.compactness);
            chi = std::max(chi, ind.obj.compactness);
            nlo = std::min(nlo, ind.obj.connectedness);
            nhi = std::max(nhi, ind.obj.connectedness);
        }
        os << gen << ',' << f0 << ',' << clo << ',' << chi << ',' << nlo << ',' << nhi << '\n';
    };
}

} // namespace moec

#endif
