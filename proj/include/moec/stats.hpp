#ifndef MOEC_STATS_HPP
#define MOEC_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/dataset.hpp"
#include "moec/moea.hpp"

namespace moec {

// Cluster-overlap counts between two partitions of the same points.
struct ContingencyTable {
    std::vector<long long> counts; // k1 x k2, row-major
    std::vector<long long> row_sums, col_sums;
    long long total = 0;
    int k1 = 0, k2 = 0;

    long long at(int i, int j) const { return counts[static_cast<std::size_t>(i) * k2 + j]; }
};

inline ContingencyTable contingency(const Partition& p1, const Partition& p2) {
    if (p1.n() != p2.n()) throw std::invalid_argument("contingency: partition size mismatch");
    ContingencyTable t;
    t.k1 = p1.k;
    t.k2 = p2.k;
    t.counts.assign(static_cast<std::size_t>(p1.k) * p2.k, 0);
    t.row_sums.assign(p1.k, 0);
    t.col_sums.assign(p2.k, 0);
    for (int i = 0; i < p1.n(); ++i) {
        ++t.counts[static_cast<std::size_t>(p1.assign[i]) * p2.k + p2.assign[i]];
        ++t.row_sums[p1.assign[i]];
        ++t.col_sums[p2.assign[i]];
        ++t.total;
    }
    return t;
}

namespace detail {

inline double choose2(long long m) { return 0.5 * static_cast<double>(m) * (m - 1); }

} // namespace detail

// Adjusted Rand index: chance-corrected pairwise co-assignment agreement.
// Degenerate zero-denominator comparisons score 1 when the partitions are
// identical and 0 otherwise.
inline double ari(const Partition& p1, const Partition& p2) {
    auto t = contingency(p1, p2);
    double index = 0.0;
    for (long long c : t.counts) index += detail::choose2(c);
    double sum_a = 0.0, sum_b = 0.0;
    for (long long a : t.row_sums) sum_a += detail::choose2(a);
    for (long long b : t.col_sums) sum_b += detail::choose2(b);
    double pairs = detail::choose2(t.total);
    double expected = pairs > 0 ? sum_a * sum_b / pairs : 0.0;
    double denom = 0.5 * (sum_a + sum_b) - expected;
    if (denom == 0.0) {
        // same co-membership iff every nonzero cell fills its row and column
        bool identical = p1.k == p2.k;
        for (int i = 0; identical && i < t.k1; ++i)
            for (int j = 0; identical && j < t.k2; ++j)
                if (t.at(i, j) != 0)
                    identical = t.at(i, j) == t.row_sums[i] && t.at(i, j) == t.col_sums[j];
        return identical ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

struct BestPick {
    double ari_value = 0.0;
    int k = 0;
    std::size_t index = 0;
    Partition part;
};

// Member of the set with the highest ARI against the truth; ties prefer a
// cluster count near k*, then fewer clusters.
inline BestPick best_of_set(const ApproximationSet& s, const Partition& truth) {
    if (s.members.empty()) throw std::invalid_argument("best_of_set: empty approximation set");
    BestPick best;
    bool have = false;
    for (std::size_t i = 0; i < s.members.size(); ++i) {
        const Partition& p = s.members[i].part;
        double a = ari(p, truth);
        bool better = false;
        if (!have) {
            better = true;
        } else if (a != best.ari_value) {
            better = a > best.ari_value;
        } else {
            int da = std::abs(p.k - truth.k), db = std::abs(best.k - truth.k);
            if (da != db)
                better = da < db;
            else if (p.k != best.k)
                better = p.k < best.k;
        }
        if (better) {
            best = {a, p.k, i, p};
            have = true;
        }
    }
    return best;
}

namespace detail {

// midranks of the pooled sample
inline std::vector<double> midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
        i = j + 1;
    }
    return rank;
}

// regularized incomplete gamma Q(a, x) by series / continued fraction
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: domain");
    if (x == 0.0) return 1.0;
    auto gln = std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a,x)
        double ap = a, sum = 1.0 / a, del = sum;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - gln);
        return 1.0 - p;
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi2_sf(double x, int df) { return gamma_q(0.5 * df, 0.5 * x); }

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }
inline double norm_pdf(double z) { return 0.39894228040143267794 * std::exp(-0.5 * z * z); }

// CDF of the studentized range with infinite degrees of freedom:
// F(q; k) = k * Int phi(z) * [Phi(z) - Phi(z-q)]^(k-1) dz
inline double ptukey_inf(double q, int k) {
    if (q <= 0.0) return 0.0;
    if (k < 2) throw std::invalid_argument("ptukey_inf: need k >= 2");
    const double lo = -8.5, hi = 8.5 + q;
    const int steps = 4000; // Simpson, even count
    const double h = (hi - lo) / steps;
    auto f = [&](double z) {
        double w = norm_cdf(z) - norm_cdf(z - q);
        return norm_pdf(z) * std::pow(w, k - 1);
    };
    double s = f(lo) + f(hi);
    for (int i = 1; i < steps; ++i) s += f(lo + h * i) * (i % 2 ? 4.0 : 2.0);
    double val = k * s * h / 3.0;
    return std::clamp(val, 0.0, 1.0);
}

} // namespace detail

struct KruskalWallisResult {
    double h = 0.0;
    double p = 1.0;
};

// Mid-rank Kruskal-Wallis H with tie correction; p from the chi-square
// upper tail with (#groups - 1) degrees of freedom.
inline KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("kruskal_wallis: need >= 2 groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("kruskal_wallis: empty group");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    if (pooled.size() < 3) throw std::invalid_argument("kruskal_wallis: need N >= 3");

    auto rank = detail::midranks(pooled);
    double h = 0.0;
    std::size_t off = 0;
    for (const auto& g : groups) {
        double rs = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rs += rank[off + i];
        h += rs * rs / static_cast<double>(g.size());
        off += g.size();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

    // tie correction
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    double corr = 1.0 - tie_sum / (n * n * n - n);
    if (corr <= 0.0) return {0.0, 1.0}; // every value identical
    h /= corr;
    if (h < 0.0) h = 0.0; // guard fp noise around zero

    double p = h == 0.0 ? 1.0 : detail::chi2_sf(h, static_cast<int>(groups.size()) - 1);
    return {h, p};
}

struct NemenyiResult {
    std::vector<std::vector<double>> p;    // symmetric, diagonal 1
    std::vector<std::vector<double>> stat; // scaled mean-rank differences
    double alpha = 0.05;

    bool significant(std::size_t i, std::size_t j) const { return i != j && p[i][j] < alpha; }
};

// All-pairs Nemenyi test for Kruskal-type ranked data. The pairwise statistic
// is the mean-rank difference scaled by sqrt(N(N+1)/12 * (1/ni + 1/nj)); its
// two-sided p-value comes from the studentized range tail at sqrt(2) times
// the statistic.
inline NemenyiResult nemenyi_posthoc(const std::vector<std::vector<double>>& groups) {
    const std::size_t g = groups.size();
    if (g < 2) throw std::invalid_argument("nemenyi_posthoc: need >= 2 groups");
    std::vector<double> pooled;
    for (const auto& grp : groups) pooled.insert(pooled.end(), grp.begin(), grp.end());
    const double n = static_cast<double>(pooled.size());
    auto rank = detail::midranks(pooled);

    std::vector<double> mean_rank(g);
    std::size_t off = 0;
    for (std::size_t i = 0; i < g; ++i) {
        double rs = 0.0;
        for (std::size_t t = 0; t < groups[i].size(); ++t) rs += rank[off + t];
        mean_rank[i] = rs / static_cast<double>(groups[i].size());
        off += groups[i].size();
    }

    NemenyiResult res;
    res.p.assign(g, std::vector<double>(g, 1.0));
    res.stat.assign(g, std::vector<double>(g, 0.0));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j) {
            double ni = static_cast<double>(groups[i].size());
            double nj = static_cast<double>(groups[j].size());
            double se = std::sqrt(n * (n + 1.0) / 12.0 * (1.0 / ni + 1.0 / nj));
            double q = se > 0.0 ? std::abs(mean_rank[i] - mean_rank[j]) / se : 0.0;
            double p = 1.0 - detail::ptukey_inf(q * std::sqrt(2.0), static_cast<int>(g));
            res.stat[i][j] = res.stat[j][i] = q;
            res.p[i][j] = res.p[j][i] = p;
        }
    return res;
}

// One benchmark execution, as persisted by the harness.
struct RunRecord {
    std::string dataset;
    std::string algorithm;
    std::uint64_t seed = 0;
    double best_ari = 0.0;
    int best_k = 0;
    double wall_seconds = 0.0; // reported to the console only, never to files
};

struct AggregateRow {
    std::string dataset;
    std::string algorithm;
    double mean_ari = 0.0;
    double std_ari = 0.0;
    double mean_k = 0.0;
    int runs = 0;
};

// Per (dataset, algorithm) mean and sample standard deviation of best ARI,
// plus the mean cluster count; rows ordered by dataset then algorithm.
inline std::vector<AggregateRow> aggregate_runs(const std::vector<RunRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{r.dataset, r.algorithm}].push_back(&r);
    std::vector<AggregateRow> rows;
    for (const auto& [key, rs] : groups) {
        AggregateRow row;
        row.dataset = key.first;
        row.algorithm = key.second;
        row.runs = static_cast<int>(rs.size());
        double sa = 0.0, sk = 0.0;
        for (auto* r : rs) {
            sa += r->best_ari;
            sk += r->best_k;
        }
        row.mean_ari = sa / rs.size();
        row.mean_k = sk / rs.size();
        double ss = 0.0;
        for (auto* r : rs) {
            double d = r->best_ari - row.mean_ari;
            ss += d * d;
        }
        row.std_ari = rs.size() > 1 ? std::sqrt(ss / (rs.size() - 1)) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct DatasetComparison {
    std::string dataset;
    std::vector<std::string> algorithms;
    double h = 0.0;
    double p = 1.0;
    NemenyiResult posthoc;
    std::vector<std::string> winners;
};

struct ComparisonReport {
    std::vector<DatasetComparison> per_dataset;
};

// Kruskal-Wallis across algorithms per dataset, Nemenyi post-hoc, and the
// winner set: the top-mean algorithm plus everything not significantly
// different from it at alpha = 0.05.
inline ComparisonReport compare_algorithms(const std::vector<RunRecord>& records) {
    std::map<std::string, std::map<std::string, std::vector<double>>> by_ds;
    for (const auto& r : records) by_ds[r.dataset][r.algorithm].push_back(r.best_ari);

    ComparisonReport report;
    for (const auto& [ds, by_algo] : by_ds) {
        if (by_algo.size() < 2) continue;
        DatasetComparison cmp;
        cmp.dataset = ds;
        std::vector<std::vector<double>> groups;
        for (const auto& [algo, vals] : by_algo) {
            cmp.algorithms.push_back(algo);
            groups.push_back(vals);
        }
        auto kw = kruskal_wallis(groups);
        cmp.h = kw.h;
        cmp.p = kw.p;
        cmp.posthoc = nemenyi_posthoc(groups);

        std::size_t top = 0;
        std::vector<double> means(groups.size());
        for (std::size_t i = 0; i < groups.size(); ++i) {
            double s = 0.0;
            for (double v : groups[i]) s += v;
            means[i] = s / groups[i].size();
            if (means[i] > means[top]) top = i;
        }
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (i == top || !cmp.posthoc.significant(i, top))
                cmp.winners.push_back(cmp.algorithms[i]);
        report.per_dataset.push_back(std::move(cmp));
    }
    return report;
}

} // namespace moec

#endif
