#ifndef MOEC_MST_HPP
#define MOEC_MST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "moec/dataset.hpp"

namespace moec {

// Minimum spanning tree in parent-pointer form (root points to itself),
// annotated with each edge's degree of interestingness and the split of
// non-root edges into relevant (gamma) and fixed (delta) links.
//
// An edge is identified by its child point index i and runs (i, parent[i]).
struct MstModel {
    std::vector<int> parent;
    std::vector<double> edge_weight; // weight of (i, parent[i]); 0 at the root
    std::vector<int> di;             // degree of interestingness; 0 at the root
    std::vector<int> gamma;          // child indices of relevant links
    std::vector<int> delta_fixed;    // child indices of fixed links
    int root = 0;

    int n() const { return static_cast<int>(parent.size()); }

    bool is_root(int i) const { return parent[i] == i; }

    double total_weight() const {
        double s = 0.0;
        for (double w : edge_weight) s += w;
        return s;
    }

    std::vector<char> gamma_mask() const {
        std::vector<char> m(parent.size(), 0);
        for (int e : gamma) m[e] = 1;
        return m;
    }
};

// Exact MST under Euclidean distance (Prim, O(n^2)). Equal-weight ties are
// broken by the lower (source, target) pair so the tree is unique per input.
inline MstModel build_mst(const Dataset& ds) {
    const int n = ds.n();
    if (n < 2) throw std::invalid_argument("build_mst: need n >= 2");

    MstModel mst;
    mst.parent.assign(n, -1);
    mst.edge_weight.assign(n, 0.0);
    mst.di.assign(n, 0);
    mst.root = 0;
    mst.parent[0] = 0;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<char> in_tree(n, 0);
    std::vector<double> best_w(n, inf);
    std::vector<int> best_u(n, -1);
    in_tree[0] = 1;
    for (int v = 1; v < n; ++v) {
        best_w[v] = point_dist(ds, 0, v);
        best_u[v] = 0;
    }

    auto edge_key = [](int u, int v) {
        return std::pair<int, int>(std::min(u, v), std::max(u, v));
    };

    for (int step = 1; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (pick < 0 || best_w[v] < best_w[pick] ||
                (best_w[v] == best_w[pick] &&
                 edge_key(best_u[v], v) < edge_key(best_u[pick], pick)))
                pick = v;
        }
        in_tree[pick] = 1;
        mst.parent[pick] = best_u[pick];
        mst.edge_weight[pick] = best_w[pick];
        for (int v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            double w = point_dist(ds, pick, v);
            if (w < best_w[v] ||
                (w == best_w[v] && edge_key(pick, v) < edge_key(best_u[v], v)))
                best_w[v] = w, best_u[v] = pick;
        }
    }
    return mst;
}

// DI of edge (i,j): the smaller of the two mutual 1-based neighbor ranks,
// with rank l_max+1 when an endpoint is missing from the other's list.
// Large DI marks a likely cluster boundary.
inline void compute_di(MstModel& mst, const NeighborTable& nn) {
    const int n = mst.n();
    for (int i = 0; i < n; ++i) {
        if (mst.is_root(i)) {
            mst.di[i] = 0;
            continue;
        }
        int j = mst.parent[i];
        mst.di[i] = std::min(nn.rank_of(i, j), nn.rank_of(j, i));
    }
}

// Target length of the delta-locus genotype: min(n-1, round(5*sqrt(n))).
inline int gamma_size_heuristic(int n) {
    if (n < 2) throw std::invalid_argument("gamma_size_heuristic: need n >= 2");
    long r = std::lround(5.0 * std::sqrt(static_cast<double>(n)));
    return static_cast<int>(std::min<long>(n - 1, r));
}

// Keep the target_gamma_size highest-DI edges as relevant links. Ties go to
// the longer edge (a longer tree edge is the better split candidate), then
// to the lower child index.
inline void split_links(MstModel& mst, int target_gamma_size) {
    const int n = mst.n();
    if (target_gamma_size < 0 || target_gamma_size > n - 1)
        throw std::invalid_argument("split_links: target size must be in [0, n-1]");

    std::vector<int> edges;
    edges.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (!mst.is_root(i)) edges.push_back(i);

    std::sort(edges.begin(), edges.end(), [&](int a, int b) {
        if (mst.di[a] != mst.di[b]) return mst.di[a] > mst.di[b];
        if (mst.edge_weight[a] != mst.edge_weight[b])
            return mst.edge_weight[a] > mst.edge_weight[b];
        return a < b;
    });

    mst.gamma.assign(edges.begin(), edges.begin() + target_gamma_size);
    mst.delta_fixed.assign(edges.begin() + target_gamma_size, edges.end());
}

// Debug dump, one row per non-root edge: edge_src,edge_dst,weight,di,in_gamma
inline void dump_mst_csv(const MstModel& mst, std::ostream& os) {
    os << "edge_src,edge_dst,weight,di,in_gamma\n";
    auto gm = mst.gamma_mask();
    for (int i = 0; i < mst.n(); ++i) {
        if (mst.is_root(i)) continue;
        os << i << ',' << mst.parent[i] << ',' << mst.edge_weight[i] << ','
           << mst.di[i] << ',' << int(gm[i]) << '\n';
    }
}

} // namespace moec

#endif
