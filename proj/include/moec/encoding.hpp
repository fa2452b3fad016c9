#ifndef MOEC_ENCODING_HPP
#define MOEC_ENCODING_HPP

#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/dataset.hpp"
#include "moec/mst.hpp"

namespace moec {

enum class GenotypeKind { Locus, DeltaLocus };

// Locus form: gene i names a point linked to point i (or i itself).
// Delta-locus form: one gene per relevant (gamma) MST link; fixed links are
// always present, so the genotype only steers the boundary candidates.
struct Genotype {
    GenotypeKind kind = GenotypeKind::Locus;
    std::vector<int> genes;
    const MstModel* context = nullptr; // required for delta-locus decoding

    int length() const { return static_cast<int>(genes.size()); }
};

inline int genotype_length(GenotypeKind kind, int n, int gamma_size) {
    return kind == GenotypeKind::Locus ? n : gamma_size;
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

inline Partition components_to_partition(UnionFind& uf, int n) {
    // densify by smallest member index: the component containing the lowest
    // point gets label 0, and so on
    Partition p;
    p.assign.assign(n, -1);
    std::vector<int> label_of_root(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (label_of_root[r] < 0) label_of_root[r] = next++;
        p.assign[i] = label_of_root[r];
    }
    p.k = next;
    return p;
}

} // namespace detail

// Clusters are the connected components of the undirected link graph the
// genotype spells out.
inline Partition decode(const Genotype& g) {
    if (g.kind == GenotypeKind::Locus) {
        const int n = g.length();
        detail::UnionFind uf(n);
        for (int i = 0; i < n; ++i) {
            int t = g.genes[i];
            if (t < 0 || t >= n)
                throw std::invalid_argument("decode: locus gene out of range");
            uf.unite(i, t);
        }
        return detail::components_to_partition(uf, n);
    }

    if (!g.context) throw std::invalid_argument("decode: delta-locus genotype without MST context");
    const MstModel& mst = *g.context;
    const int n = mst.n();
    if (g.length() != static_cast<int>(mst.gamma.size()))
        throw std::invalid_argument("decode: gene count does not match gamma size");
    detail::UnionFind uf(n);
    for (int e : mst.delta_fixed) uf.unite(e, mst.parent[e]);
    for (int idx = 0; idx < g.length(); ++idx) {
        int child = mst.gamma[idx];
        int t = g.genes[idx];
        if (t < 0 || t >= n)
            throw std::invalid_argument("decode: delta gene out of range");
        if (t == child) continue; // self-link: relevant edge removed
        uf.unite(child, t);
    }
    return detail::components_to_partition(uf, n);
}

// The canonical "all links intact" individual; decodes to a single cluster.
inline Genotype encode_mst_full(const MstModel& mst, GenotypeKind kind) {
    Genotype g;
    g.kind = kind;
    if (kind == GenotypeKind::Locus) {
        g.genes = mst.parent; // root keeps its self-link
    } else {
        g.context = &mst;
        g.genes.reserve(mst.gamma.size());
        for (int e : mst.gamma) g.genes.push_back(mst.parent[e]);
    }
    return g;
}

inline void dump_genotype(const Genotype& g, std::ostream& os) {
    os << (g.kind == GenotypeKind::Locus ? "locus" : "delta-locus");
    for (int v : g.genes) os << ' ' << v;
    os << '\n';
}

} // namespace moec

#endif
