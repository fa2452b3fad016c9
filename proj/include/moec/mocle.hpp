#ifndef MOEC_MOCLE_HPP
#define MOEC_MOCLE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "moec/base_clusterers.hpp"
#include "moec/dataset.hpp"
#include "moec/moea.hpp"
#include "moec/objectives.hpp"
#include "moec/rng.hpp"

namespace moec {

// Points on one side, the clusters of both parents on the other; every point
// carries exactly one membership edge per parent.
struct BipartiteEnsembleGraph {
    int n = 0;
    int ka = 0, kb = 0;
    std::vector<int> cluster_a; // per point, cluster vertex in [0, ka)
    std::vector<int> cluster_b; // per point, cluster vertex in [ka, ka+kb)

    int cluster_count() const { return ka + kb; }
    long long edge_count() const { return 2LL * n; }
};

inline BipartiteEnsembleGraph build_ensemble_graph(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("build_ensemble_graph: size mismatch");
    BipartiteEnsembleGraph g;
    g.n = a.n();
    g.ka = a.k;
    g.kb = b.k;
    g.cluster_a = a.assign;
    g.cluster_b.resize(g.n);
    for (int i = 0; i < g.n; ++i) g.cluster_b[i] = g.ka + b.assign[i];
    return g;
}

namespace detail {

// Cyclic Jacobi eigensolver for small symmetric matrices; returns
// eigenvalues descending with matching columns in vecs.
inline void jacobi_eigen(std::vector<double>& a, int m, std::vector<double>& vals,
                         std::vector<double>& vecs) {
    vecs.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) vecs[static_cast<std::size_t>(i) * m + i] = 1.0;
    auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * m + c]; };
    auto V = [&](int r, int c) -> double& { return vecs[static_cast<std::size_t>(r) * m + c]; };

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-24) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int r = 0; r < m; ++r) {
                    double arp = A(r, p), arq = A(r, q);
                    A(r, p) = c * arp - s * arq;
                    A(r, q) = s * arp + c * arq;
                }
                for (int r = 0; r < m; ++r) {
                    double apr = A(p, r), aqr = A(q, r);
                    A(p, r) = c * apr - s * aqr;
                    A(q, r) = s * apr + c * aqr;
                }
                for (int r = 0; r < m; ++r) {
                    double vrp = V(r, p), vrq = V(r, q);
                    V(r, p) = c * vrp - s * vrq;
                    V(r, q) = s * vrp + c * vrq;
                }
            }
    }
    vals.resize(m);
    for (int i = 0; i < m; ++i) vals[i] = A(i, i);
    // order eigenpairs by eigenvalue descending, ties by column index
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (vals[x] != vals[y]) return vals[x] > vals[y];
        return x < y;
    });
    std::vector<double> v2(vals.size());
    std::vector<double> e2(vecs.size());
    for (int c = 0; c < m; ++c) {
        v2[c] = vals[order[c]];
        for (int r = 0; r < m; ++r)
            e2[static_cast<std::size_t>(r) * m + c] = vecs[static_cast<std::size_t>(r) * m + order[c]];
    }
    vals = std::move(v2);
    vecs = std::move(e2);
    // deterministic sign: largest-magnitude entry of each column is positive
    for (int c = 0; c < m; ++c) {
        int arg = 0;
        double best = 0.0;
        for (int r = 0; r < m; ++r) {
            double v = std::abs(vecs[static_cast<std::size_t>(r) * m + c]);
            if (v > best) best = v, arg = r;
        }
        if (vecs[static_cast<std::size_t>(arg) * m + c] < 0.0)
            for (int r = 0; r < m; ++r) vecs[static_cast<std::size_t>(r) * m + c] *= -1.0;
    }
}

// k-means on an n x dim embedding matrix (plain doubles, seeded).
inline std::vector<int> kmeans_rows(const std::vector<double>& rows, int n, int dim, int k,
                                    int restarts, int max_iter, Rng& rng) {
    auto sqd = [&](int i, const double* c) {
        const double* x = rows.data() + static_cast<std::size_t>(i) * dim;
        double s = 0.0;
        for (int j = 0; j < dim; ++j) {
            double t = x[j] - c[j];
            s += t * t;
        }
        return s;
    };
    std::vector<int> best_assign(n, 0);
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> cent(static_cast<std::size_t>(k) * dim);
    std::vector<int> assign(n), cnt(k);
    for (int r = 0; r < restarts; ++r) {
        auto seeds = rng.sample_indices(n, k);
        for (int c = 0; c < k; ++c)
            std::copy_n(rows.data() + seeds[c] * dim, dim, cent.begin() + static_cast<std::size_t>(c) * dim);
        std::fill(assign.begin(), assign.end(), -1);
        for (int it = 0; it < max_iter; ++it) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int bc = 0;
                double bd = sqd(i, cent.data());
                for (int c = 1; c < k; ++c) {
                    double dd = sqd(i, cent.data() + static_cast<std::size_t>(c) * dim);
                    if (dd < bd) bd = dd, bc = c;
                }
                if (assign[i] != bc) assign[i] = bc, changed = true;
            }
            std::fill(cent.begin(), cent.end(), 0.0);
            std::fill(cnt.begin(), cnt.end(), 0);
            for (int i = 0; i < n; ++i) {
                double* c = cent.data() + static_cast<std::size_t>(assign[i]) * dim;
                const double* x = rows.data() + static_cast<std::size_t>(i) * dim;
                for (int j = 0; j < dim; ++j) c[j] += x[j];
                ++cnt[assign[i]];
            }
            for (int c = 0; c < k; ++c)
                if (cnt[c] > 0)
                    for (int j = 0; j < dim; ++j)
                        cent[static_cast<std::size_t>(c) * dim + j] /= cnt[c];
            if (!changed) break;
        }
        double obj = 0.0;
        for (int i = 0; i < n; ++i)
            obj += sqd(i, cent.data() + static_cast<std::size_t>(assign[i]) * dim);
        if (obj < best_obj) best_obj = obj, best_assign = assign;
    }
    return best_assign;
}

} // namespace detail

struct HbgfResult {
    Partition part;
    bool degenerate_fallback = false;
};

// HBGF ensemble crossover: embed the point side of the bipartite membership
// graph along its top singular directions and cluster the embedding into
// k_child groups. When the parents jointly support fewer than k_child
// distinct groups, the largest groups are split by 2-means in data space.
inline HbgfResult hbgf_crossover_full(const Partition& a, const Partition& b, int k_child,
                                      const Dataset& ds, Rng& rng) {
    const int n = a.n();
    if (k_child < 2 || k_child > n)
        throw std::invalid_argument("hbgf_crossover: k_child must be in [2, n]");
    auto g = build_ensemble_graph(a, b);
    const int K = g.cluster_count();

    // distinct co-membership cells bound the granularity the graph supports
    std::vector<long long> cell_of(n);
    for (int i = 0; i < n; ++i)
        cell_of[i] = static_cast<long long>(g.cluster_a[i]) * (g.ka + g.kb) + g.cluster_b[i];
    auto cells = cell_of;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    const int n_cells = static_cast<int>(cells.size());

    HbgfResult res;
    if (k_child <= n_cells) {
        // normalized adjacency W = Dr^-1/2 A Dc^-1/2; spectral directions come
        // from the small cluster-side matrix W^T W
        std::vector<double> col_deg(K, 0.0);
        for (int i = 0; i < n; ++i) {
            col_deg[g.cluster_a[i]] += 1.0;
            col_deg[g.cluster_b[i]] += 1.0;
        }
        std::vector<double> M(static_cast<std::size_t>(K) * K, 0.0);
        for (int i = 0; i < n; ++i) {
            int ca = g.cluster_a[i], cb = g.cluster_b[i];
            double w = 0.5; // Dr^-1 contribution, every point row has degree 2
            M[static_cast<std::size_t>(ca) * K + ca] += w;
            M[static_cast<std::size_t>(cb) * K + cb] += w;
            M[static_cast<std::size_t>(ca) * K + cb] += w;
            M[static_cast<std::size_t>(cb) * K + ca] += w;
        }
        for (int p = 0; p < K; ++p)
            for (int q = 0; q < K; ++q)
                M[static_cast<std::size_t>(p) * K + q] /= std::sqrt(col_deg[p] * col_deg[q]);

        std::vector<double> vals, vecs;
        detail::jacobi_eigen(M, K, vals, vecs);

        const int dim = std::min(k_child, K);
        std::vector<double> emb(static_cast<std::size_t>(n) * dim, 0.0);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < dim; ++c) {
                double va = vecs[static_cast<std::size_t>(g.cluster_a[i]) * K + c] /
                            std::sqrt(col_deg[g.cluster_a[i]]);
                double vb = vecs[static_cast<std::size_t>(g.cluster_b[i]) * K + c] /
                            std::sqrt(col_deg[g.cluster_b[i]]);
                emb[static_cast<std::size_t>(i) * dim + c] = va + vb;
            }
        auto assign = detail::kmeans_rows(emb, n, dim, k_child, 3, 60, rng);
        res.part = partition_from_labels(assign);
    } else {
        // not enough joint structure: start from the co-membership cells
        res.degenerate_fallback = true;
        std::vector<long long> lab = cell_of;
        res.part = partition_from_labels(lab);
    }

    // top up by splitting the largest splittable cluster with 2-means in
    // data space until the requested granularity is reached
    while (res.part.k < k_child) {
        auto sizes = res.part.cluster_sizes();
        std::vector<int> order(res.part.k);
        for (int c = 0; c < res.part.k; ++c) order[c] = c;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            if (sizes[x] != sizes[y]) return sizes[x] > sizes[y];
            return x < y;
        });
        bool split_done = false;
        for (int c : order) {
            if (sizes[c] < 2) break;
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (res.part.assign[i] == c) members.push_back(i);
            // sub-dataset view for the 2-means split
            std::vector<double> rows(members.size() * ds.dim);
            for (std::size_t m = 0; m < members.size(); ++m) {
                auto x = ds.point(members[m]);
                std::copy(x.begin(), x.end(), rows.begin() + m * ds.dim);
            }
            bool distinct = false;
            for (std::size_t m = 1; m < members.size() && !distinct; ++m)
                for (int j = 0; j < ds.dim; ++j)
                    if (rows[m * ds.dim + j] != rows[j]) {
                        distinct = true;
                        break;
                    }
            if (!distinct) continue;
            auto sub = detail::kmeans_rows(rows, static_cast<int>(members.size()), ds.dim, 2, 2,
                                           40, rng);
            bool has0 = false, has1 = false;
            for (int s : sub) (s == 0 ? has0 : has1) = true;
            if (!has0 || !has1) continue;
            int new_label = res.part.k;
            for (std::size_t m = 0; m < members.size(); ++m)
                if (sub[m] == 1) res.part.assign[members[m]] = new_label;
            res.part.k += 1;
            res.degenerate_fallback = true;
            split_done = true;
            break;
        }
        if (!split_done) break; // nothing splittable left; accept smaller k
    }
    res.part = partition_from_labels(res.part.assign);
    return res;
}

inline Partition hbgf_crossover(const Partition& a, const Partition& b, int k_child,
                                const Dataset& ds, Rng& rng) {
    return hbgf_crossover_full(a, b, k_child, ds, rng).part;
}

// MOCLE: base partitions are the initial population, HBGF is the only
// variation operator, selection is NSGA-II on (dev, con). The returned set
// is the non-dominated front over every individual evaluated in the run, so
// a base partition nothing ever dominated is guaranteed to survive.
inline ApproximationSet run_mocle(const BasePartitionSet& base, const Dataset& ds,
                                  const NeighborTable& nn, int L, int generations, Rng& rng) {
    if (base.partitions.size() < 2)
        throw std::invalid_argument("run_mocle: need at least 2 base partitions");

    const std::size_t N = base.partitions.size();
    auto make_ind = [&](const Partition& p) {
        Individual ind;
        ind.part = p;
        ind.obj = evaluate_partition(p, CriteriaKind::DevCon, ds, nn, L);
        return ind;
    };

    std::vector<Individual> pop;
    pop.reserve(N * 2);
    for (const auto& bp : base.partitions) pop.push_back(make_ind(bp.part));

    // all-time elite archive (unbounded): guarantees the elitism property
    std::vector<Individual> elite;
    auto elite_insert = [&](const Individual& cand) {
        for (const auto& e : elite)
            if (dominates(e.obj, cand.obj)) return;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < elite.size(); ++i)
            if (!dominates(cand.obj, elite[i].obj)) {
                if (keep != i) elite[keep] = std::move(elite[i]);
                ++keep;
            }
        elite.resize(keep);
        elite.push_back(cand);
    };
    for (const auto& ind : pop) elite_insert(ind);

    {
        auto fronts = nondominated_sort(pop);
        for (auto& f : fronts) crowding_distance(f, pop);
    }

    for (int gen = 1; gen <= generations; ++gen) {
        std::vector<Individual> children;
        children.reserve(N);
        for (std::size_t c = 0; c < N; ++c) {
            const Individual& pa = pop[detail::tournament_pick(pop, rng)];
            const Individual& pb = pop[detail::tournament_pick(pop, rng)];
            int klo = std::min(pa.part.k, pb.part.k);
            int khi = std::max(pa.part.k, pb.part.k);
            int k_child = static_cast<int>(rng.next_int(klo, khi));
            k_child = std::clamp(k_child, 2, ds.n());
            Rng pair_rng = rng.spawn();
            Individual child = make_ind(hbgf_crossover(pa.part, pb.part, k_child, ds, pair_rng));
            elite_insert(child);
            children.push_back(std::move(child));
        }
        for (auto& c : children) pop.push_back(std::move(c));
        auto fronts = nondominated_sort(pop);
        for (auto& f : fronts) crowding_distance(f, pop);
        std::vector<Individual> next;
        next.reserve(N);
        for (auto& front : fronts) {
            if (next.size() + front.size() <= N) {
                for (auto i : front) next.push_back(std::move(pop[i]));
            } else {
                std::vector<std::size_t> order = front;
                std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                    if (pop[x].crowding != pop[y].crowding) return pop[x].crowding > pop[y].crowding;
                    return x < y;
                });
                for (std::size_t i = 0; next.size() < N; ++i)
                    next.push_back(std::move(pop[order[i]]));
            }
            if (next.size() == N) break;
        }
        pop = std::move(next);
        auto fr = nondominated_sort(pop);
        for (auto& f : fr) crowding_distance(f, pop);
    }

    ApproximationSet result;
    result.members = std::move(elite);
    for (auto& m : result.members) m.rank = 0;
    return result;
}

} // namespace moec

#endif
