#ifndef MOEC_OBJECTIVES_HPP
#define MOEC_OBJECTIVES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/dataset.hpp"
#include "moec/encoding.hpp"

namespace moec {

enum class CriteriaKind { DevCon, VarCon };

// One point in bi-objective space; both components are minimized.
struct ObjectivePair {
    double compactness = 0.0;  // dev or var, per algorithm
    double connectedness = 0.0; // con
    CriteriaKind labels = CriteriaKind::DevCon;
};

namespace detail {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// Cluster centroids with compensated accumulation; d can run into the
// thousands (expression data), where naive summation starts to drift.
inline std::vector<double> centroids(const Partition& p, const Dataset& ds) {
    const int n = ds.n(), d = ds.dim, k = p.k;
    std::vector<KahanSum> acc(static_cast<std::size_t>(k) * d);
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
        auto x = ds.point(i);
        auto* row = acc.data() + static_cast<std::size_t>(p.assign[i]) * d;
        for (int c = 0; c < d; ++c) row[c].add(x[c]);
        ++cnt[p.assign[i]];
    }
    std::vector<double> mu(static_cast<std::size_t>(k) * d);
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < d; ++j)
            mu[static_cast<std::size_t>(c) * d + j] =
                acc[static_cast<std::size_t>(c) * d + j].value() / cnt[c];
    return mu;
}

inline double dist_to_centroid(const Dataset& ds, int i, const std::vector<double>& mu, int c) {
    auto x = ds.point(i);
    const double* m = mu.data() + static_cast<std::size_t>(c) * ds.dim;
    double s = 0.0;
    for (int j = 0; j < ds.dim; ++j) {
        double t = x[j] - m[j];
        s += t * t;
    }
    return std::sqrt(s);
}

} // namespace detail

// Overall deviation: summed distance of every point to its cluster centroid.
inline double dev(const Partition& p, const Dataset& ds) {
    if (p.n() != ds.n()) throw std::invalid_argument("dev: partition does not cover dataset");
    auto mu = detail::centroids(p, ds);
    detail::KahanSum s;
    for (int i = 0; i < ds.n(); ++i)
        s.add(detail::dist_to_centroid(ds, i, mu, p.assign[i]));
    return s.value();
}

// Intra-cluster variance: mean squared centroid distance.
inline double var(const Partition& p, const Dataset& ds) {
    if (p.n() != ds.n()) throw std::invalid_argument("var: partition does not cover dataset");
    auto mu = detail::centroids(p, ds);
    detail::KahanSum s;
    for (int i = 0; i < ds.n(); ++i) {
        double t = detail::dist_to_centroid(ds, i, mu, p.assign[i]);
        s.add(t * t);
    }
    return s.value() / ds.n();
}

// Connectivity: a point whose j-th nearest neighbor sits in another cluster
// contributes 1/j, for j = 1..L.
inline double con(const Partition& p, const NeighborTable& nn, int L) {
    if (L < 1 || L > nn.l_max) throw std::invalid_argument("con: L exceeds neighbor table depth");
    if (p.n() != nn.n()) throw std::invalid_argument("con: partition does not cover table");
    detail::KahanSum s;
    for (int i = 0; i < nn.n(); ++i) {
        auto row = nn.row(i);
        for (int j = 0; j < L; ++j)
            if (p.assign[row[j]] != p.assign[i]) s.add(1.0 / (j + 1));
    }
    return s.value();
}

inline double harmonic(int L) {
    double h = 0.0;
    for (int j = 1; j <= L; ++j) h += 1.0 / j;
    return h;
}

enum class Algo { Mock, DeltaMock, Mocle };

inline std::string algo_name(Algo a) {
    switch (a) {
        case Algo::Mock: return "mock";
        case Algo::DeltaMock: return "delta-mock";
        default: return "mocle";
    }
}

inline CriteriaKind criteria_of(Algo a) {
    return a == Algo::DeltaMock ? CriteriaKind::VarCon : CriteriaKind::DevCon;
}

inline ObjectivePair evaluate_partition(const Partition& p, CriteriaKind crit,
                                        const Dataset& ds, const NeighborTable& nn, int L) {
    ObjectivePair o;
    o.labels = crit;
    o.compactness = crit == CriteriaKind::VarCon ? var(p, ds) : dev(p, ds);
    o.connectedness = con(p, nn, L);
    return o;
}

inline ObjectivePair evaluate(const Genotype& g, Algo algo, const Dataset& ds,
                              const NeighborTable& nn, int L) {
    GenotypeKind want = algo == Algo::DeltaMock ? GenotypeKind::DeltaLocus : GenotypeKind::Locus;
    if (g.kind != want)
        throw std::invalid_argument("evaluate: genotype kind does not match algorithm");
    return evaluate_partition(decode(g), criteria_of(algo), ds, nn, L);
}

} // namespace moec

#endif
