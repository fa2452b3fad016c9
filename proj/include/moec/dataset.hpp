#ifndef MOEC_DATASET_HPP
#define MOEC_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace moec {

// Dense cluster assignment of all n points; labels run 0..k-1 with no
// empty cluster. The universal phenotype shared by every algorithm here.
struct Partition {
    std::vector<int> assign;
    int k = 0;

    int n() const { return static_cast<int>(assign.size()); }

    std::vector<int> cluster_sizes() const {
        std::vector<int> sz(k, 0);
        for (int a : assign) ++sz[a];
        return sz;
    }

    bool valid() const {
        if (assign.empty() || k < 1 || k > n()) return false;
        std::vector<char> seen(k, 0);
        for (int a : assign) {
            if (a < 0 || a >= k) return false;
            seen[a] = 1;
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }
};

// Re-map arbitrary labels to dense 0..k-1, preserving first-occurrence order.
inline Partition partition_from_labels(const std::vector<long long>& raw) {
    if (raw.empty()) throw std::invalid_argument("partition_from_labels: empty label sequence");
    Partition p;
    p.assign.resize(raw.size());
    std::vector<long long> order;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto it = std::find(order.begin(), order.end(), raw[i]);
        if (it == order.end()) {
            order.push_back(raw[i]);
            it = order.end() - 1;
        }
        p.assign[i] = static_cast<int>(it - order.begin());
    }
    p.k = static_cast<int>(order.size());
    return p;
}

inline Partition partition_from_labels(const std::vector<int>& raw) {
    std::vector<long long> tmp(raw.begin(), raw.end());
    return partition_from_labels(tmp);
}

// Point set with optional ground truth. Feature rows are stored flat,
// row-major; distances are always recomputed on demand so that even
// UKC1-sized data never needs an n x n matrix.
struct Dataset {
    std::vector<double> features; // n * d, row-major
    int dim = 0;
    std::optional<Partition> truth;
    std::string name;

    int n() const { return dim == 0 ? 0 : static_cast<int>(features.size()) / dim; }

    std::span<const double> point(int i) const {
        return std::span<const double>(features.data() + static_cast<std::size_t>(i) * dim, dim);
    }

    int true_k() const { return truth ? truth->k : 0; }
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double point_dist(const Dataset& ds, int i, int j) {
    return euclidean(ds.point(i), ds.point(j));
}

// Per-point list of the l_max exact nearest neighbors, nearest first.
// Ties broken by lower point index so runs are reproducible.
struct NeighborTable {
    std::vector<int> ranks; // n * l_max, row-major
    int l_max = 0;

    int n() const { return l_max == 0 ? 0 : static_cast<int>(ranks.size()) / l_max; }

    std::span<const int> row(int i) const {
        return std::span<const int>(ranks.data() + static_cast<std::size_t>(i) * l_max, l_max);
    }

    // 1-based rank of j in i's list, or l_max+1 when j is not in the list
    int rank_of(int i, int j) const {
        auto r = row(i);
        for (int pos = 0; pos < l_max; ++pos)
            if (r[pos] == j) return pos + 1;
        return l_max + 1;
    }
};

inline NeighborTable build_neighbor_table(const Dataset& ds, int l_max) {
    const int n = ds.n();
    if (l_max < 1 || l_max > n - 1)
        throw std::invalid_argument("build_neighbor_table: l_max must be in [1, n-1]");
    NeighborTable nt;
    nt.l_max = l_max;
    nt.ranks.resize(static_cast<std::size_t>(n) * l_max);

    std::vector<std::pair<double, int>> cand(n - 1);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            cand[m++] = {point_dist(ds, i, j), j};
        }
        std::partial_sort(cand.begin(), cand.begin() + l_max, cand.end());
        for (int p = 0; p < l_max; ++p)
            nt.ranks[static_cast<std::size_t>(i) * l_max + p] = cand[p].second;
    }
    return nt;
}

enum class LabelMode { EmbeddedLastColumn, SeparateFile, None };

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

inline double parse_number(const std::string& s, const std::string& ctx) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("parse error: non-numeric value '" + s + "' " + ctx);
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size())
        throw std::runtime_error("parse error: trailing garbage in '" + s + "' " + ctx);
    return v;
}

} // namespace detail

// CSV ingestion. Features are comma-separated decimals, no header unless
// skip_header is set; labels either ride in the last column, live in a
// side file (one integer per line) or are absent.
inline Dataset load_dataset(const std::string& path, LabelMode mode,
                            const std::string& label_path = "",
                            bool skip_header = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path);

    Dataset ds;
    ds.name = path;
    std::vector<long long> raw_labels;
    std::string line;
    int row = 0, cols = -1;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        auto cells = detail::split_csv_row(line);
        int want_feats = static_cast<int>(cells.size()) - (mode == LabelMode::EmbeddedLastColumn ? 1 : 0);
        if (cols < 0) {
            cols = want_feats;
            if (cols < 1) throw std::runtime_error("format error: no feature columns in " + path);
        } else if (want_feats != cols) {
            throw std::runtime_error("format error: ragged row " + std::to_string(row + 1) +
                                     " in " + path);
        }
        std::string ctx = "(row " + std::to_string(row + 1) + " of " + path + ")";
        for (int c = 0; c < cols; ++c)
            ds.features.push_back(detail::parse_number(cells[c], ctx));
        if (mode == LabelMode::EmbeddedLastColumn) {
            double lv = detail::parse_number(cells.back(), ctx);
            long long l = static_cast<long long>(std::llround(lv));
            if (static_cast<double>(l) != lv)
                throw std::runtime_error("parse error: non-integer label " + ctx);
            raw_labels.push_back(l);
        }
        ++row;
    }
    ds.dim = cols < 0 ? 0 : cols;
    if (ds.n() < 2) throw std::runtime_error("format error: dataset needs at least 2 rows: " + path);

    if (mode == LabelMode::SeparateFile) {
        std::ifstream lin(label_path);
        if (!lin) throw std::runtime_error("load_dataset: cannot open label file " + label_path);
        std::string ll;
        while (std::getline(lin, ll)) {
            if (!ll.empty() && ll.back() == '\r') ll.pop_back();
            if (ll.empty()) continue;
            raw_labels.push_back(static_cast<long long>(
                std::llround(detail::parse_number(ll, "(label file)"))));
        }
    }
    if (mode != LabelMode::None) {
        if (static_cast<int>(raw_labels.size()) != ds.n())
            throw std::runtime_error("mismatch error: " + std::to_string(raw_labels.size()) +
                                     " labels for " + std::to_string(ds.n()) + " rows");
        ds.truth = partition_from_labels(raw_labels);
    }
    return ds;
}

} // namespace moec

#endif
