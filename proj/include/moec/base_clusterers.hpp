#ifndef MOEC_BASE_CLUSTERERS_HPP
#define MOEC_BASE_CLUSTERERS_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/dataset.hpp"
#include "moec/encoding.hpp"
#include "moec/rng.hpp"

namespace moec {

struct BasePartition {
    Partition part;
    std::string source; // kmeans | ward | snn | external
    std::string params;
};

struct BasePartitionSet {
    std::vector<BasePartition> partitions;
    std::vector<std::string> warnings;

    bool empty() const { return partitions.empty(); }
    std::size_t size() const { return partitions.size(); }
};

namespace detail {

inline double sq_dist_to(const Dataset& ds, int i, const double* c) {
    auto x = ds.point(i);
    double s = 0.0;
    for (int j = 0; j < ds.dim; ++j) {
        double t = x[j] - c[j];
        s += t * t;
    }
    return s;
}

} // namespace detail

// Lloyd iterations, best of `restarts` k-means++ seedings. Empty clusters
// are repaired by seizing the point currently farthest from its own centroid.
inline Partition kmeans(const Dataset& ds, int k, int restarts, int max_iter, Rng& rng) {
    const int n = ds.n(), d = ds.dim;
    if (k < 1 || k > n) throw std::invalid_argument("kmeans: k must be in [1, n]");

    Partition best;
    double best_obj = std::numeric_limits<double>::infinity();

    std::vector<double> cent(static_cast<std::size_t>(k) * d);
    std::vector<int> assign(n), cnt(k);
    std::vector<double> min_sq(n);

    for (int r = 0; r < restarts; ++r) {
        // k-means++ seeding: next center drawn proportional to the squared
        // distance from the centers chosen so far
        {
            int first = static_cast<int>(rng.next_index(n));
            auto x0 = ds.point(first);
            std::copy(x0.begin(), x0.end(), cent.begin());
            for (int i = 0; i < n; ++i) min_sq[i] = detail::sq_dist_to(ds, i, cent.data());
            for (int c = 1; c < k; ++c) {
                double total = 0.0;
                for (int i = 0; i < n; ++i) total += min_sq[i];
                int pick = n - 1;
                if (total > 0.0) {
                    double roll = rng.next_real() * total;
                    double acc = 0.0;
                    for (int i = 0; i < n; ++i) {
                        acc += min_sq[i];
                        if (acc >= roll) {
                            pick = i;
                            break;
                        }
                    }
                } else {
                    pick = static_cast<int>(rng.next_index(n));
                }
                auto x = ds.point(pick);
                std::copy(x.begin(), x.end(), cent.begin() + static_cast<std::size_t>(c) * d);
                for (int i = 0; i < n; ++i)
                    min_sq[i] = std::min(min_sq[i],
                                         detail::sq_dist_to(ds, i, cent.data() +
                                                                       static_cast<std::size_t>(c) * d));
            }
        }
        std::fill(assign.begin(), assign.end(), -1);

        for (int it = 0; it < max_iter; ++it) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int bc = 0;
                double bd = detail::sq_dist_to(ds, i, cent.data());
                for (int c = 1; c < k; ++c) {
                    double dd = detail::sq_dist_to(ds, i, cent.data() + static_cast<std::size_t>(c) * d);
                    if (dd < bd) bd = dd, bc = c;
                }
                if (assign[i] != bc) assign[i] = bc, changed = true;
            }
            // means
            std::fill(cent.begin(), cent.end(), 0.0);
            std::fill(cnt.begin(), cnt.end(), 0);
            for (int i = 0; i < n; ++i) {
                auto x = ds.point(i);
                double* c = cent.data() + static_cast<std::size_t>(assign[i]) * d;
                for (int j = 0; j < d; ++j) c[j] += x[j];
                ++cnt[assign[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (cnt[c] > 0) {
                    double* p = cent.data() + static_cast<std::size_t>(c) * d;
                    for (int j = 0; j < d; ++j) p[j] /= cnt[c];
                } else {
                    // seize the farthest point as the new singleton cluster
                    int far = -1;
                    double fd = -1.0;
                    for (int i = 0; i < n; ++i) {
                        if (cnt[assign[i]] <= 1) continue;
                        double dd = detail::sq_dist_to(
                            ds, i, cent.data() + static_cast<std::size_t>(assign[i]) * d);
                        if (dd > fd) fd = dd, far = i;
                    }
                    if (far >= 0) {
                        --cnt[assign[far]];
                        assign[far] = c;
                        cnt[c] = 1;
                        auto x = ds.point(far);
                        std::copy(x.begin(), x.end(), cent.begin() + static_cast<std::size_t>(c) * d);
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }

        double obj = 0.0;
        for (int i = 0; i < n; ++i)
            obj += detail::sq_dist_to(ds, i, cent.data() + static_cast<std::size_t>(assign[i]) * d);
        if (obj < best_obj) {
            best_obj = obj;
            best = partition_from_labels(assign);
        }
    }
    return best;
}

// Full Ward merge history: merges[s] joins two clusters at step s. Clusters
// are named by their smallest member point; cutting after n-k merges yields
// the k-cluster partition.
struct WardMerge {
    int a = 0, b = 0;  // cluster representatives (smallest member index)
    double height = 0; // variance increase of this merge
};

// Nearest-neighbor-chain agglomeration with the Lance-Williams update for
// Ward's criterion. Deterministic; ties resolved toward smaller indices.
inline std::vector<WardMerge> ward_merge_sequence(const Dataset& ds) {
    const int n = ds.n();
    // condensed matrix of current inter-cluster Ward costs
    std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double w = point_dist(ds, i, j);
            D[static_cast<std::size_t>(i) * n + j] = D[static_cast<std::size_t>(j) * n + i] =
                0.5 * w * w;
        }

    std::vector<int> size(n, 1);
    std::vector<char> alive(n, 1);
    std::vector<WardMerge> merges;
    merges.reserve(n - 1);

    std::vector<int> chain;
    chain.reserve(n);
    auto cost = [&](int a, int b) { return D[static_cast<std::size_t>(a) * n + b]; };

    for (int step = 0; step < n - 1; ++step) {
        if (chain.empty()) {
            for (int i = 0; i < n; ++i)
                if (alive[i]) {
                    chain.push_back(i);
                    break;
                }
        }
        while (true) {
            int a = chain.back();
            int nb = -1;
            double bd = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (!alive[j] || j == a) continue;
                double dd = cost(a, j);
                if (dd < bd || (dd == bd && nb >= 0 && j < nb)) bd = dd, nb = j;
            }
            if (chain.size() >= 2 && nb == chain[chain.size() - 2]) break;
            // prefer closing a mutual pair over walking on at equal cost
            if (chain.size() >= 2 && cost(a, chain[chain.size() - 2]) == bd) break;
            chain.push_back(nb);
        }
        int a = chain.back();
        chain.pop_back();
        int b = chain.back();
        chain.pop_back();
        if (a > b) std::swap(a, b); // a survives as the smaller representative

        double h = cost(a, b);
        merges.push_back({a, b, h});

        int sa = size[a], sb = size[b];
        for (int j = 0; j < n; ++j) {
            if (!alive[j] || j == a || j == b) continue;
            double dj = ((sa + size[j]) * cost(a, j) + (sb + size[j]) * cost(b, j) -
                         size[j] * cost(a, b)) /
                        (sa + sb + size[j]);
            D[static_cast<std::size_t>(a) * n + j] = D[static_cast<std::size_t>(j) * n + a] = dj;
        }
        alive[b] = 0;
        size[a] = sa + sb;
    }

    // NN-chain can emit merges out of height order; replay them sorted
    std::stable_sort(merges.begin(), merges.end(),
                     [](const WardMerge& x, const WardMerge& y) { return x.height < y.height; });
    return merges;
}

inline Partition ward_cut(const std::vector<WardMerge>& merges, int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("ward_cut: k must be in [1, n]");
    detail::UnionFind uf(n);
    for (int s = 0; s < n - k; ++s) uf.unite(merges[s].a, merges[s].b);
    std::vector<int> flat(n);
    for (int i = 0; i < n; ++i) flat[i] = uf.find(i);
    return partition_from_labels(flat);
}

inline Partition ward_linkage(const Dataset& ds, int k) {
    auto merges = ward_merge_sequence(ds);
    return ward_cut(merges, ds.n(), k);
}

// Shared-nearest-neighbor clustering. Similarity of a mutual neighbor pair
// is the overlap of their snn_k-neighbor lists; core points with enough
// strong links form the cluster skeleton, everything else attaches to its
// most similar core or stays a singleton.
inline Partition snn_cluster(const Dataset& ds, const NeighborTable& nn, int snn_k, int eps,
                             int min_pts) {
    const int n = ds.n();
    if (snn_k > nn.l_max) throw std::invalid_argument("snn_cluster: snn_k exceeds table depth");

    std::vector<std::vector<std::pair<int, int>>> sim(n); // (neighbor, shared count), mutual only
    for (int i = 0; i < n; ++i) {
        auto ri = nn.row(i).subspan(0, snn_k);
        for (int j : ri) {
            if (j < i) continue; // handle each unordered pair once
            auto rj = nn.row(j).subspan(0, snn_k);
            bool mutual = std::find(rj.begin(), rj.end(), i) != rj.end();
            if (!mutual) continue;
            int shared = 0;
            for (int a : ri)
                if (std::find(rj.begin(), rj.end(), a) != rj.end()) ++shared;
            sim[i].push_back({j, shared});
            sim[j].push_back({i, shared});
        }
    }

    std::vector<char> core(n, 0);
    for (int i = 0; i < n; ++i) {
        int strong = 0;
        for (auto& [j, s] : sim[i])
            if (s >= eps) ++strong;
        core[i] = strong >= min_pts;
    }

    detail::UnionFind uf(n);
    for (int i = 0; i < n; ++i) {
        if (!core[i]) continue;
        for (auto& [j, s] : sim[i])
            if (core[j] && s >= eps) uf.unite(i, j);
    }

    std::vector<int> lab(n, -1);
    for (int i = 0; i < n; ++i) {
        if (core[i]) {
            lab[i] = uf.find(i);
            continue;
        }
        int best = -1, bs = 0;
        for (auto& [j, s] : sim[i])
            if (core[j] && (s > bs || (s == bs && best >= 0 && j < best))) bs = s, best = j;
        lab[i] = best >= 0 && bs > 0 ? uf.find(best) : n + i; // unattached: own singleton
    }
    return partition_from_labels(lab);
}

// Canonical co-membership key for deduplication.
inline std::string partition_key(const Partition& p) {
    std::string s;
    s.reserve(p.assign.size() * 3);
    for (int a : p.assign) {
        s += std::to_string(a);
        s += ',';
    }
    return s;
}

struct SnnGridPoint {
    int snn_k, eps, min_pts;
};

// The declared SNN sweep grid; the source algorithms' own settings are not
// published, so the sweep covers coarse-to-fine neighborhood scales.
inline std::vector<SnnGridPoint> snn_default_grid() {
    std::vector<SnnGridPoint> g;
    for (int k : {7, 10, 15, 20, 25, 30})
        for (double ef : {0.3, 0.5})
            for (double mf : {0.34, 0.5}) {
                int eps = std::max(1, static_cast<int>(std::lround(ef * k)));
                int mp = std::max(1, static_cast<int>(std::lround(mf * k)));
                g.push_back({k, eps, mp});
            }
    return g;
}

// All built-in clusterers swept so that cluster counts land in [2, 2k*];
// duplicates (same co-membership) collapse to the first occurrence.
inline BasePartitionSet sweep_base_partitions(const Dataset& ds, int k_star, Rng& rng,
                                              int kmeans_restarts = 10, int kmeans_max_iter = 100) {
    if (k_star < 1) throw std::invalid_argument("sweep_base_partitions: k* must be >= 1");
    const int n = ds.n();
    const int k_lo = 2, k_hi = std::min(2 * k_star, n);

    BasePartitionSet out;
    std::map<std::string, bool> seen;
    auto push = [&](Partition&& p, const std::string& src, const std::string& prm) {
        if (p.k < k_lo || p.k > k_hi) return false;
        auto key = partition_key(p);
        if (seen.count(key)) return true; // in range, but a duplicate
        seen[key] = true;
        out.partitions.push_back({std::move(p), src, prm});
        return true;
    };

    bool kmeans_any = false;
    for (int k = k_lo; k <= k_hi; ++k)
        kmeans_any |= push(kmeans(ds, k, kmeans_restarts, kmeans_max_iter, rng), "kmeans",
                           "k=" + std::to_string(k));
    if (!kmeans_any) out.warnings.push_back("kmeans produced no partition in range");

    // the stored-matrix agglomeration needs O(n^2) memory; past ~12k points
    // that is gigabytes, so ward sits out and the sweep records why
    if (n <= 12000) {
        bool ward_any = false;
        auto merges = ward_merge_sequence(ds);
        for (int k = k_lo; k <= k_hi; ++k)
            ward_any |= push(ward_cut(merges, n, k), "ward", "k=" + std::to_string(k));
        if (!ward_any) out.warnings.push_back("ward produced no partition in range");
    } else {
        out.warnings.push_back("ward skipped: n exceeds the stored-matrix limit");
    }

    auto grid = snn_default_grid();
    int max_k = 0;
    for (auto& g : grid) max_k = std::max(max_k, g.snn_k);
    max_k = std::min(max_k, n - 1);
    auto nn = build_neighbor_table(ds, max_k);
    bool snn_any = false;
    for (auto& g : grid) {
        if (g.snn_k > nn.l_max) continue;
        snn_any |= push(snn_cluster(ds, nn, g.snn_k, g.eps, g.min_pts), "snn",
                        "snn_k=" + std::to_string(g.snn_k) + " eps=" + std::to_string(g.eps) +
                            " min_pts=" + std::to_string(g.min_pts));
    }
    if (!snn_any)
        out.warnings.push_back("snn produced no partition with cluster count in required range");

    return out;
}

// One partition per line, n space-separated integer labels.
inline BasePartitionSet ingest_partitions(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_partitions: cannot open " + path);
    BasePartitionSet out;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::istringstream ss(line);
        std::vector<long long> lab;
        long long v;
        while (ss >> v) lab.push_back(v);
        if (static_cast<int>(lab.size()) != n)
            throw std::runtime_error("format error: line " + std::to_string(row) + " of " + path +
                                     " has " + std::to_string(lab.size()) + " labels, expected " +
                                     std::to_string(n));
        out.partitions.push_back(
            {partition_from_labels(lab), "external", "line=" + std::to_string(row)});
    }
    return out;
}

// Sweep results can be re-exported in the same format for reuse.
inline void export_partitions(const BasePartitionSet& set, std::ostream& os) {
    for (const auto& bp : set.partitions) {
        for (int i = 0; i < bp.part.n(); ++i) os << (i ? " " : "") << bp.part.assign[i];
        os << '\n';
    }
}

} // namespace moec

#endif
