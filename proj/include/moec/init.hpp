#ifndef MOEC_INIT_HPP
#define MOEC_INIT_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/base_clusterers.hpp"
#include "moec/dataset.hpp"
#include "moec/encoding.hpp"
#include "moec/mst.hpp"
#include "moec/rng.hpp"

namespace moec {

enum class InitProvenance { MstRemoval, KmeansBoundary };

struct InitialPopulation {
    std::vector<Genotype> genotypes;
    std::vector<InitProvenance> provenance;

    std::size_t size() const { return genotypes.size(); }
};

namespace detail {

// Pick the m most interesting links. Edges strictly above the DI cutoff are
// always taken; the remaining slots are drawn at random among the edges tied
// at the cutoff, so equally interesting boundaries all get their turn.
inline std::vector<int> top_di_links(const MstModel& mst, int m, Rng& rng) {
    if (m <= 0) return {};
    std::vector<int> edges;
    for (int i = 0; i < mst.n(); ++i)
        if (!mst.is_root(i)) edges.push_back(i);
    if (m >= static_cast<int>(edges.size())) return edges;
    std::sort(edges.begin(), edges.end(), [&](int a, int b) {
        if (mst.di[a] != mst.di[b]) return mst.di[a] > mst.di[b];
        if (mst.edge_weight[a] != mst.edge_weight[b])
            return mst.edge_weight[a] > mst.edge_weight[b];
        return a < b;
    });
    int cut_di = mst.di[edges[m - 1]];
    int firm = 0;
    while (firm < m && mst.di[edges[firm]] > cut_di) ++firm;
    int tie_end = firm;
    while (tie_end < static_cast<int>(edges.size()) && mst.di[edges[tie_end]] == cut_di) ++tie_end;

    std::vector<int> out(edges.begin(), edges.begin() + firm);
    std::vector<int> tied(edges.begin() + firm, edges.begin() + tie_end);
    for (auto idx : rng.sample_indices(tied.size(), m - firm)) out.push_back(tied[idx]);
    return out;
}

} // namespace detail

// MOCK's two-phase initial population: half the individuals cut the most
// interesting MST links for a target k, half erase every MST link that
// crosses a k-means boundary. All genotypes are full-length locus encodings.
inline InitialPopulation init_mock(const Dataset& ds, const MstModel& mst,
                                   const NeighborTable& nn, int pop_size, int k_max, Rng& rng) {
    if (pop_size < 2) throw std::invalid_argument("init_mock: pop_size must be >= 2");
    if (k_max < 2) throw std::invalid_argument("init_mock: k_max must be >= 2");
    (void)nn;

    InitialPopulation pop;
    const int phase1 = pop_size / 2 + pop_size % 2;

    for (int i = 0; i < phase1; ++i) {
        int k = static_cast<int>(rng.next_int(2, k_max));
        Genotype g = encode_mst_full(mst, GenotypeKind::Locus);
        for (int e : detail::top_di_links(mst, k - 1, rng)) g.genes[e] = e;
        pop.genotypes.push_back(std::move(g));
        pop.provenance.push_back(InitProvenance::MstRemoval);
    }

    for (int i = phase1; i < pop_size; ++i) {
        int k = static_cast<int>(rng.next_int(2, k_max));
        Partition km = kmeans(ds, k, 1, 50, rng);
        Genotype g = encode_mst_full(mst, GenotypeKind::Locus);
        for (int e = 0; e < mst.n(); ++e) {
            if (mst.is_root(e)) continue;
            if (km.assign[e] != km.assign[mst.parent[e]]) g.genes[e] = e;
        }
        pop.genotypes.push_back(std::move(g));
        pop.provenance.push_back(InitProvenance::KmeansBoundary);
    }
    return pop;
}

// Delta-MOCK initialization: the first individual keeps the full MST; every
// other one removes a uniformly sized random subset of the relevant links.
inline InitialPopulation init_delta_mock(const MstModel& mst, int pop_size, Rng& rng) {
    if (mst.gamma.empty()) throw std::invalid_argument("init_delta_mock: gamma links not split");
    if (pop_size < 1) throw std::invalid_argument("init_delta_mock: pop_size must be >= 1");

    InitialPopulation pop;
    pop.genotypes.push_back(encode_mst_full(mst, GenotypeKind::DeltaLocus));
    pop.provenance.push_back(InitProvenance::MstRemoval);

    const std::size_t g_len = mst.gamma.size();
    for (int i = 1; i < pop_size; ++i) {
        Genotype g = encode_mst_full(mst, GenotypeKind::DeltaLocus);
        std::size_t m = static_cast<std::size_t>(rng.next_int(1, static_cast<long>(g_len)));
        for (auto idx : rng.sample_indices(g_len, m)) g.genes[idx] = mst.gamma[idx];
        pop.genotypes.push_back(std::move(g));
        pop.provenance.push_back(InitProvenance::MstRemoval);
    }
    return pop;
}

} // namespace moec

#endif
