#ifndef MOEC_SYNTH_HPP
#define MOEC_SYNTH_HPP

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/dataset.hpp"
#include "moec/rng.hpp"

namespace moec {

// A dataset with several nested ground-truth resolutions (one label vector
// per structure level).
struct SynthData {
    Dataset points;                           // truth unset here
    std::vector<std::vector<int>> levels;     // per level, n labels
    std::vector<std::string> level_names;

    Dataset with_truth(std::size_t level) const {
        Dataset ds = points;
        ds.truth = partition_from_labels(levels.at(level));
        ds.name += "_" + level_names.at(level);
        return ds;
    }
};

namespace synth {

constexpr double kPi = 3.14159265358979323846;

inline void push_point(Dataset& ds, double x, double y) {
    ds.features.push_back(x);
    ds.features.push_back(y);
}

inline void gauss_blob(Dataset& ds, Rng& rng, double cx, double cy, double sigma, int count,
                       double clip = 2.8) {
    for (int i = 0; i < count; ++i) {
        double dx, dy;
        do {
            dx = rng.normal() * sigma;
            dy = rng.normal() * sigma;
        } while (dx * dx + dy * dy > clip * clip * sigma * sigma);
        push_point(ds, cx + dx, cy + dy);
    }
}

} // namespace synth

// Desk-scale counterpart of the ds2c2sc13 benchmark: 588 points in the
// plane carrying three nested structures (2, 5 and 13 clusters).
//
// Level E2 holds a crescent (smile), an elongated cluster threaded through
// the crescent's concavity, and three globular clusters; level E1 merges
// them into the two far-apart superclusters; level E3 refines every E2
// cluster into its fragments. The elongated cluster's two halves touch the
// crescent near its arms, so at L=10 the true five-cluster structure keeps a
// small positive connectivity while the four-component partition that merges
// smile and line is the finest fully connected one - the dominance trap the
// E1 structure probes.
inline SynthData make_ds2c2sc13(std::uint64_t seed = 588001) {
    Rng rng(seed);
    SynthData out;
    out.points.name = "ds2c2sc13";
    out.points.dim = 2;
    out.level_names = {"E1", "E2", "E3"};

    std::vector<int> e1, e2, e3;
    auto tag = [&](int a, int b, int c) {
        e1.push_back(a);
        e2.push_back(b);
        e3.push_back(c);
    };

    // --- smile: circular arc of radius 14 spanning 200..340 degrees,
    //     three 40-point segments separated by small angular gaps. Segment
    //     ends are densified so arm points keep their ten nearest neighbors
    //     on the arc, which keeps the smile-line contact outside L=10.
    const double arc_r = 14.0;
    const double deg = synth::kPi / 180.0;
    const double seg_span = 44.33, seg_gap = 3.5;
    for (int seg = 0; seg < 3; ++seg) {
        double a0 = 200.0 + seg * (seg_span + seg_gap);
        for (int i = 0; i < 40; ++i) {
            double u = static_cast<double>(i) / 39.0;
            double cheb = 0.5 * (1.0 - std::cos(synth::kPi * u));
            double t = 0.7 * u + 0.3 * cheb;
            double a = (a0 + seg_span * t) * deg;
            double r = arc_r + (rng.next_real() - 0.5) * 0.10;
            synth::push_point(out.points, r * std::cos(a), r * std::sin(a));
            tag(0, 0, seg);
        }
    }

    // --- elongated cluster: polyline through the crescent's concavity.
    //     Spacing plan per half: a few wider tip gaps, a dense middle, then a
    //     strictly shrinking run into the central gap. The shrinking run
    //     makes every gap-adjacent tree link a mutual-nearest edge, and the
    //     central gap stays wider than both arm contacts.
    {
        std::vector<double> gaps;
        for (int i = 0; i < 9; ++i) gaps.push_back(0.24);      // dense tip region
        for (int i = 0; i < 20; ++i) gaps.push_back(0.28);     // middle
        for (double g : {1.05, 0.90, 0.80, 0.70}) gaps.push_back(g); // run to the gap
        std::vector<double> pos_a{0.0};
        for (double g : gaps) pos_a.push_back(pos_a.back() + g);
        double half = pos_a.back();      // 34 points end at the gap edge
        double gap_e = 2.80;             // central split of the line
        double total = 2.0 * half + gap_e;

        // curve: radius dips from 11.45 to 9.5 mid-way, same angular span;
        // the 2.55 arm clearance undercuts the 2.8 central gap, so the tree
        // attaches each line half to the smile rather than across the gap
        auto curve = [&](double u) {
            double r = 11.45 - 1.95 * std::sin(synth::kPi * u);
            double a = (200.0 + 140.0 * u) * deg;
            return std::pair<double, double>(r * std::cos(a), r * std::sin(a));
        };
        // arc-length lookup table for an even mapping of the spacing plan
        const int lut = 4000;
        std::vector<double> cum(lut + 1, 0.0);
        auto prev = curve(0.0);
        for (int i = 1; i <= lut; ++i) {
            auto p = curve(static_cast<double>(i) / lut);
            cum[i] = cum[i - 1] + std::hypot(p.first - prev.first, p.second - prev.second);
            prev = p;
        }
        double curve_len = cum[lut];
        auto at_len = [&](double s) {
            double target = s / total * curve_len;
            int lo = 0, hi = lut;
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                if (cum[mid] < target)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            double u = static_cast<double>(lo) / lut;
            return curve(u);
        };
        auto emit = [&](double s, int leaf) {
            auto [x, y] = at_len(s);
            // jitter roughly perpendicular to the spine
            double a = (200.0 + 140.0 * (s / total)) * deg;
            x += std::cos(a) * (rng.next_real() - 0.5) * 0.10;
            y += std::sin(a) * (rng.next_real() - 0.5) * 0.10;
            synth::push_point(out.points, x, y);
            tag(0, 1, leaf);
        };
        for (int i = 0; i < 34; ++i) emit(pos_a[i], 3);                    // first half
        for (int i = 33; i >= 0; --i) emit(total - pos_a[i], 4);           // mirrored half
    }

    // --- right supercluster: one two-lobed globular cluster and two
    //     three-piece globular clusters, all far from the smile
    // A bridge pair sits 45% of the way between two sub-blob centers and is
    // labeled with the near blob. It keeps the two sub-blobs 10-NN-coupled
    // (the globular cluster stays one component at L=10) at a modest,
    // draw-independent cost for cutting the valley.
    auto bridge = [&](double ax, double ay, double bx, double by, int e1l, int e2l, int e3l) {
        double mx = ax + 0.45 * (bx - ax), my = ay + 0.45 * (by - ay);
        for (int i = 0; i < 2; ++i) {
            synth::push_point(out.points, mx + rng.normal() * 0.10, my + rng.normal() * 0.10);
            tag(e1l, e2l, e3l);
        }
    };

    synth::gauss_blob(out.points, rng, 44.4, 0.0, 0.75, 64);
    for (int i = 0; i < 64; ++i) tag(1, 2, 5);
    bridge(44.4, 0.0, 48.15, 0.0, 1, 2, 5);
    synth::gauss_blob(out.points, rng, 48.15, 0.0, 0.75, 67);
    for (int i = 0; i < 67; ++i) tag(1, 2, 6);

    synth::gauss_blob(out.points, rng, 58.8, 9.2, 0.60, 40);
    for (int i = 0; i < 40; ++i) tag(1, 3, 7);
    bridge(58.8, 9.2, 61.9, 9.25, 1, 3, 7);
    bridge(58.8, 9.2, 60.35, 11.85, 1, 3, 7);
    synth::gauss_blob(out.points, rng, 61.9, 9.25, 0.60, 44);
    for (int i = 0; i < 44; ++i) tag(1, 3, 8);
    synth::gauss_blob(out.points, rng, 60.35, 11.85, 0.60, 45);
    for (int i = 0; i < 45; ++i) tag(1, 3, 9);

    synth::gauss_blob(out.points, rng, 58.6, -10.7, 0.62, 41);
    for (int i = 0; i < 41; ++i) tag(1, 4, 10);
    bridge(58.6, -10.7, 61.8, -10.55, 1, 4, 10);
    bridge(58.6, -10.7, 60.2, -8.05, 1, 4, 10);
    synth::gauss_blob(out.points, rng, 61.8, -10.55, 0.62, 45);
    for (int i = 0; i < 45; ++i) tag(1, 4, 11);
    synth::gauss_blob(out.points, rng, 60.2, -8.05, 0.62, 44);
    for (int i = 0; i < 44; ++i) tag(1, 4, 12);

    // Make the finest labeling locally optimal for the L=10 connectivity:
    // while some point's leaf assignment has a strictly cheaper alternative
    // among its neighbors' leaves (inside the same mid-level cluster), take
    // it. Only labels move, never points, so the nested structure and all
    // geometric properties stay put.
    {
        const int n = static_cast<int>(e3.size());
        const int L = 10;
        auto nn = build_neighbor_table(out.points, L);
        std::vector<std::vector<std::pair<int, int>>> rev(n); // (j, pos) with i in row(j)
        for (int j = 0; j < n; ++j) {
            auto row = nn.row(j);
            for (int pos = 0; pos < L; ++pos) rev[row[pos]].push_back({j, pos});
        }
        const int leaf_parent[13] = {0, 0, 0, 1, 1, 2, 2, 3, 3, 3, 4, 4, 4};
        std::vector<int> leaf_size(13, 0);
        for (int l : e3) ++leaf_size[l];

        for (int pass = 0; pass < 8; ++pass) {
            bool moved = false;
            for (int i = 0; i < n; ++i) {
                int cur = e3[i];
                if (leaf_size[cur] <= 3) continue;
                auto row = nn.row(i);
                for (int pos = 0; pos < L; ++pos) {
                    int cand = e3[row[pos]];
                    if (cand == cur || leaf_parent[cand] != leaf_parent[cur]) continue;
                    double delta = 0.0;
                    for (int p = 0; p < L; ++p) {
                        int lj = e3[row[p]];
                        delta += ((lj != cand) - (lj != cur)) / double(p + 1);
                    }
                    for (auto& [j, p] : rev[i]) {
                        int lj = e3[j];
                        delta += ((lj != cand) - (lj != cur)) / double(p + 1);
                    }
                    if (delta < -1e-12) {
                        --leaf_size[cur];
                        ++leaf_size[cand];
                        e3[i] = cand;
                        moved = true;
                        break;
                    }
                }
            }
            if (!moved) break;
        }
        // mid and top levels follow the repaired leaves
        for (int i = 0; i < n; ++i) {
            e2[i] = leaf_parent[e3[i]];
            e1[i] = e2[i] <= 1 ? 0 : 1;
        }
    }

    out.levels = {e1, e2, e3};
    return out;
}

// 31 slightly overlapping, equally sized Gaussian clusters spread over a
// square, in the spirit of the classic D31 benchmark.
inline SynthData make_d31(std::uint64_t seed = 310001) {
    Rng rng(seed);
    SynthData out;
    out.points.name = "d31";
    out.points.dim = 2;
    out.level_names = {"full"};

    std::vector<std::pair<double, double>> centers;
    while (centers.size() < 31) {
        double x = rng.next_real() * 27.0, y = rng.next_real() * 27.0;
        bool ok = true;
        for (auto& c : centers)
            if (std::hypot(c.first - x, c.second - y) < 3.1) {
                ok = false;
                break;
            }
        if (ok) centers.push_back({x, y});
    }
    std::vector<int> lab;
    for (int c = 0; c < 31; ++c) {
        synth::gauss_blob(out.points, rng, centers[c].first, centers[c].second, 0.52, 100, 2.6);
        for (int i = 0; i < 100; ++i) lab.push_back(c);
    }
    out.levels = {lab};
    return out;
}

// 60 well-separated Gaussian clusters of uneven size in 20 dimensions,
// mirroring the shape of the tevc_20_60_1 generator output.
inline SynthData make_tevc_20_60(std::uint64_t seed = 2060001) {
    Rng rng(seed);
    SynthData out;
    out.points.name = "tevc_20_60_1";
    out.points.dim = 20;
    out.level_names = {"full"};

    const int k = 60, n_target = 4395, d = 20;
    std::vector<int> sizes(k, 40);
    int rest = n_target - 40 * k;
    while (rest > 0) {
        int c = static_cast<int>(rng.next_index(k));
        int add = std::min<int>(rest, static_cast<int>(rng.next_index(70)) + 1);
        sizes[c] += add;
        rest -= add;
    }

    std::vector<std::vector<double>> centers;
    while (static_cast<int>(centers.size()) < k) {
        std::vector<double> c(d);
        for (auto& v : c) v = rng.next_real() * 60.0;
        bool ok = true;
        for (auto& o : centers) {
            double sq = 0.0;
            for (int j = 0; j < d; ++j) sq += (c[j] - o[j]) * (c[j] - o[j]);
            if (std::sqrt(sq) < 20.0) {
                ok = false;
                break;
            }
        }
        if (ok) centers.push_back(std::move(c));
    }

    std::vector<int> lab;
    std::vector<double> offset(d);
    for (int c = 0; c < k; ++c) {
        double sigma = 0.8 + rng.next_real() * 0.8;
        for (int i = 0; i < sizes[c]; ++i) {
            // clip the 20-d radius so the clusters have no stray far tails
            double sq;
            do {
                sq = 0.0;
                for (int j = 0; j < d; ++j) {
                    offset[j] = rng.normal();
                    sq += offset[j] * offset[j];
                }
            } while (sq > d + 2.5 * std::sqrt(2.0 * d));
            for (int j = 0; j < d; ++j)
                out.points.features.push_back(centers[c][j] + offset[j] * sigma);
            lab.push_back(c);
        }
    }
    out.levels = {lab};
    return out;
}

// Two heavily overlapping Gaussians with a few tight 4-point satellite
// clumps on their rims; the clumps are what MST/DI-driven initialization
// likes to isolate into tiny clusters.
inline SynthData make_overlap_pair(std::uint64_t seed = 600001) {
    Rng rng(seed);
    SynthData out;
    out.points.name = "overlap2g";
    out.points.dim = 2;
    out.level_names = {"full"};

    std::vector<int> lab;
    const double cx[2] = {0.0, 2.6}, cy[2] = {0.0, 0.0};
    // four far-tail micro-clumps past the saddle between the Gaussians; each
    // belongs to one Gaussian but sits metrically closer to the other, so
    // MST-derived searches either misplace it or isolate it outright
    const double clump_x[2] = {2.05, 0.55};
    const double clump_y[2] = {3.35, -4.00};
    const int clump_owner[2] = {0, 1};
    for (int b = 0; b < 2; ++b) {
        synth::gauss_blob(out.points, rng, cx[b], cy[b], 1.0, 296, 2.4);
        for (int i = 0; i < 296; ++i) lab.push_back(b);
        for (int s = 0; s < 2; ++s) {
            if (clump_owner[s] != b) continue;
            for (int i = 0; i < 4; ++i) {
                synth::push_point(out.points, clump_x[s] + rng.normal() * 0.07,
                                  clump_y[s] + rng.normal() * 0.07);
                lab.push_back(b);
            }
        }
    }
    out.levels = {lab};
    return out;
}

// Two clean, well-separated Gaussian blobs; a sanity dataset.
inline SynthData make_two_blobs(int per_blob = 30, std::uint64_t seed = 42) {
    Rng rng(seed);
    SynthData out;
    out.points.name = "two_blobs";
    out.points.dim = 2;
    out.level_names = {"full"};
    std::vector<int> lab;
    synth::gauss_blob(out.points, rng, 0.0, 0.0, 0.5, per_blob);
    for (int i = 0; i < per_blob; ++i) lab.push_back(0);
    synth::gauss_blob(out.points, rng, 8.0, 0.0, 0.5, per_blob);
    for (int i = 0; i < per_blob; ++i) lab.push_back(1);
    out.levels = {lab};
    return out;
}

// Writers for the CSV + label-file interchange format.
inline void write_features_csv(const Dataset& ds, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_features_csv: cannot open " + path);
    os.precision(17);
    for (int i = 0; i < ds.n(); ++i) {
        auto p = ds.point(i);
        for (int j = 0; j < ds.dim; ++j) os << (j ? "," : "") << p[j];
        os << '\n';
    }
}

inline void write_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_labels: cannot open " + path);
    for (int l : labels) os << l << '\n';
}

} // namespace moec

#endif
