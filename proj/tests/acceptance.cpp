// Acceptance suite: runs the benchmark's verification protocol end to end
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// hard failures; soft criteria downgrade to warnings, and criteria whose
// external input is absent report BLOCKED with the reason.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "moec/moec.hpp"
#include "oracles.hpp"

using namespace moec;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    std::string name;
    std::string status; // PASS | FAIL | WARN | BLOCKED
    std::string detail;
};

std::vector<Outcome> outcomes;

void report(const std::string& name, bool pass, const std::string& detail, bool soft = false) {
    Outcome o;
    o.name = name;
    o.status = pass ? "PASS" : (soft ? "WARN" : "FAIL");
    o.detail = detail;
    outcomes.push_back(o);
    std::printf("CRITERION %-4s %-7s %s\n", name.c_str(), o.status.c_str(), detail.c_str());
    std::fflush(stdout);
}

void report_blocked(const std::string& name, const std::string& detail) {
    outcomes.push_back({name, "BLOCKED", detail});
    std::printf("CRITERION %-4s BLOCKED %s\n", name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion1_oracles() {
    auto t0 = Clock::now();
    Rng rng(11001);

    int ari_bad = 0;
    for (int t = 0; t < 500; ++t) {
        int n = 3 + static_cast<int>(rng.next_index(10));
        auto p1 = oracle::random_partition(n, 1 + static_cast<int>(rng.next_index(4)), rng);
        auto p2 = oracle::random_partition(n, 1 + static_cast<int>(rng.next_index(4)), rng);
        if (std::abs(ari(p1, p2) - oracle::ari_pairs(p1, p2)) > 1e-12) ++ari_bad;
    }

    bool fronts_ok = true;
    {
        std::vector<Individual> pop;
        std::vector<ObjectivePair> objs;
        for (int i = 0; i < 200; ++i) {
            ObjectivePair o;
            o.compactness = rng.next_index(40) * 0.25;
            o.connectedness = rng.next_index(40) * 0.25;
            Individual ind;
            ind.obj = o;
            pop.push_back(ind);
            objs.push_back(o);
        }
        auto mine = nondominated_sort(pop);
        auto ref = oracle::fronts_peeling(objs);
        fronts_ok = mine.size() == ref.size();
        for (std::size_t f = 0; fronts_ok && f < mine.size(); ++f) {
            auto a = mine[f];
            auto b = ref[f];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            fronts_ok = a == b;
        }
    }

    int mst_bad = 0;
    for (int t = 0; t < 100; ++t) {
        int n = 3 + static_cast<int>(rng.next_index(5));
        Dataset ds;
        ds.dim = 2;
        for (int i = 0; i < n * 2; ++i) ds.features.push_back(rng.next_real() * 5.0);
        auto mst = build_mst(ds);
        if (std::abs(mst.total_weight() - oracle::mst_weight_exhaustive(ds)) > 1e-12) ++mst_bad;
    }

    double secs = elapsed_s(t0);
    bool pass = ari_bad == 0 && fronts_ok && mst_bad == 0 && secs < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "oracle equivalence: ari mismatches %d/500, fronts %s, mst mismatches %d/100, "
                  "%.1fs (< 60s)",
                  ari_bad, fronts_ok ? "exact" : "DIFFER", mst_bad, secs);
    report("1", pass, buf);
}

// ---------------------------------------------------------------- criterion 2
void criterion2_objectives() {
    Rng rng(11002);
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        int n = 5 + static_cast<int>(rng.next_index(26));
        int d = 1 + static_cast<int>(rng.next_index(4));
        Dataset ds;
        ds.dim = d;
        for (int i = 0; i < n * d; ++i) ds.features.push_back(rng.next_real() * 10.0);
        auto p = oracle::random_partition(n, 1 + static_cast<int>(rng.next_index(6)), rng);
        if (std::abs(dev(p, ds) - oracle::dev_two_pass(p, ds)) > 1e-9) ++bad;
        if (std::abs(var(p, ds) - oracle::var_two_pass(p, ds)) > 1e-9) ++bad;
        int L = 1 + static_cast<int>(rng.next_index(std::min(10, n - 1)));
        auto nn = build_neighbor_table(ds, L);
        if (std::abs(con(p, nn, L) - oracle::con_rescan(p, ds, L)) > 1e-9) ++bad;
    }

    bool exact_ok = true;
    {
        Dataset ds;
        ds.dim = 2;
        Rng r2(11003);
        const int n = 30;
        for (int i = 0; i < n * 2; ++i) ds.features.push_back(r2.next_real() * 8.0);
        Partition one;
        one.assign.assign(n, 0);
        one.k = 1;
        Partition sing;
        sing.assign.resize(n);
        for (int i = 0; i < n; ++i) sing.assign[i] = i;
        sing.k = n;
        for (int L : {1, 5, 10}) {
            auto nn = build_neighbor_table(ds, L);
            if (con(one, nn, L) != 0.0) exact_ok = false;
            if (con(sing, nn, L) != n * harmonic(L)) exact_ok = false;
        }
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "objective correctness: %d oracle mismatches/600 checks, exact identities %s",
                  bad, exact_ok ? "hold" : "VIOLATED");
    report("2", bad == 0 && exact_ok, buf);
}

// ---------------------------------------------------------------- criterion 3
struct DeskResult {
    std::map<std::string, std::map<std::string, std::vector<RunRecord>>> by_ds_algo;
    double secs = 0.0;
    std::string out_dir;
    ExperimentConfig cfg;
};

DeskResult run_desk_suite(const std::string& work, const std::string& out_sub, int runs) {
    auto sd = make_ds2c2sc13();
    for (int lvl = 0; lvl < 3; ++lvl) {
        std::string base = work + "/ds2c2sc13_E" + std::to_string(lvl + 1);
        write_features_csv(sd.points, base + ".csv");
        write_labels(sd.levels[lvl], base + ".labels");
        std::ofstream os(base + ".base"); // external partition, Table-3 stand-in
        for (std::size_t i = 0; i < sd.levels[lvl].size(); ++i)
            os << (i ? " " : "") << sd.levels[lvl][i];
        os << '\n';
    }

    ExperimentConfig cfg;
    for (int lvl = 1; lvl <= 3; ++lvl) {
        DatasetSpec spec;
        spec.name = "ds2c2sc13_E" + std::to_string(lvl);
        std::string base = work + "/" + spec.name;
        spec.path = base + ".csv";
        spec.mode = LabelMode::SeparateFile;
        spec.label_path = base + ".labels";
        spec.ingest_path = base + ".base";
        cfg.datasets.push_back(spec);
    }
    cfg.runs = runs;
    cfg.seed = 20260808;
    cfg.out_dir = work + "/" + out_sub;

    DeskResult res;
    res.cfg = cfg;
    res.out_dir = cfg.out_dir;
    auto t0 = Clock::now();
    std::ostringstream log;
    auto result = run_experiment(cfg, log);
    res.secs = elapsed_s(t0);
    for (auto& r : result.records) res.by_ds_algo[r.dataset][r.algorithm].push_back(r);
    return res;
}

void criterion3_table2(const DeskResult& desk) {
    auto mean_of = [&](const std::string& ds, const std::string& algo) {
        const auto& rs = desk.by_ds_algo.at(ds).at(algo);
        double s = 0;
        for (auto& r : rs) s += r.best_ari;
        return s / rs.size();
    };
    auto max_of = [&](const std::string& ds, const std::string& algo) {
        const auto& rs = desk.by_ds_algo.at(ds).at(algo);
        double m = -2;
        for (auto& r : rs) m = std::max(m, r.best_ari);
        return m;
    };
    auto modal_k = [&](const std::string& ds, const std::string& algo) {
        std::map<int, int> cnt;
        for (auto& r : desk.by_ds_algo.at(ds).at(algo)) ++cnt[r.best_k];
        int bk = -1, bc = -1;
        for (auto& [k, c] : cnt)
            if (c > bc) bc = c, bk = k;
        return bk;
    };

    char buf[256];
    {
        double e2 = mean_of("ds2c2sc13_E2", "mocle");
        double e3 = mean_of("ds2c2sc13_E3", "mocle");
        std::snprintf(buf, sizeof buf, "MOCLE mean best ARI: E2 %.4f, E3 %.4f (need >= 0.99)", e2,
                      e3);
        report("3a", e2 >= 0.99 && e3 >= 0.99, buf);
    }
    {
        double m = mean_of("ds2c2sc13_E2", "mock");
        std::snprintf(buf, sizeof buf, "MOCK mean best ARI on E2 %.4f (need >= 0.95)", m);
        report("3b", m >= 0.95, buf);
    }
    {
        double m = mean_of("ds2c2sc13_E2", "delta-mock");
        int mk = modal_k("ds2c2sc13_E2", "delta-mock");
        bool pass = m >= 0.952 - 0.05 && m <= 0.952 + 0.05 && mk == 6;
        std::snprintf(buf, sizeof buf,
                      "delta-MOCK on E2: mean best ARI %.4f (0.952 +/- 0.05), modal k %d (need 6)",
                      m, mk);
        report("3c", pass, buf);
    }
    {
        double a = max_of("ds2c2sc13_E1", "mocle");
        double b = max_of("ds2c2sc13_E1", "mock");
        double c = max_of("ds2c2sc13_E1", "delta-mock");
        std::snprintf(buf, sizeof buf,
                      "E1 dominance trap: max best ARI mocle %.4f, mock %.4f, delta-mock %.4f "
                      "(all <= 0.6)",
                      a, b, c);
        report("3d", a <= 0.6 && b <= 0.6 && c <= 0.6, buf);
    }
    std::snprintf(buf, sizeof buf, "desk-scale runtime %.1fs (budget 900s)", desk.secs);
    report("3e", desk.secs <= 900.0, buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion4_baselines(const std::string& work) {
    // 4a: Ward on the real Seeds data (requires the UCI file)
    {
        std::string seeds_path = "data/real/seeds_dataset.txt";
        if (const char* env = std::getenv("MOEC_SEEDS_PATH")) seeds_path = env;
        std::ifstream in(seeds_path);
        if (!in) {
            report_blocked("4a",
                           "ward on seeds needs the UCI file at data/real/seeds_dataset.txt "
                           "(or MOEC_SEEDS_PATH); not bundled and not downloadable here");
        } else {
            // whitespace-separated: 7 features then the class label
            Dataset ds;
            ds.dim = 7;
            std::vector<long long> labels;
            double v[8];
            while (in >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >> v[6] >> v[7]) {
                for (int j = 0; j < 7; ++j) ds.features.push_back(v[j]);
                labels.push_back(static_cast<long long>(v[7]));
            }
            ds.truth = partition_from_labels(labels);
            auto merges = ward_merge_sequence(ds);
            double best = -2;
            int bestk = 0;
            for (int k = 2; k <= 2 * ds.true_k(); ++k) {
                double a = ari(ward_cut(merges, ds.n(), k), *ds.truth);
                if (a > best) best = a, bestk = k;
            }
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "ward on seeds: best in-range ARI %.4f at k=%d (need 0.727 +/- 0.01)",
                          best, bestk);
            report("4a", std::abs(best - 0.727) <= 0.01, buf);
        }
    }
    // 4b: k-means on the D31-style dataset
    {
        auto sd = make_d31();
        auto ds = sd.with_truth(0);
        Rng rng(11004);
        double best = -2;
        int bestk = 0;
        for (int k = 2; k <= 2 * ds.true_k(); ++k) {
            auto p = kmeans(ds, k, 10, 100, rng);
            double a = ari(p, *ds.truth);
            if (a > best) best = a, bestk = k;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "k-means on d31: best in-range ARI %.4f at k=%d (need >= 0.92)",
                      best, bestk);
        report("4b", best >= 0.92, buf);
    }
    // 4c (soft): SNN sweep on the tevc-style dataset
    {
        auto sd = make_tevc_20_60();
        auto ds = sd.with_truth(0);
        int max_k = 0;
        for (auto& g : snn_default_grid()) max_k = std::max(max_k, g.snn_k);
        auto nn = build_neighbor_table(ds, max_k);
        double best = -2;
        for (auto& g : snn_default_grid()) {
            auto p = snn_cluster(ds, nn, g.snn_k, g.eps, g.min_pts);
            if (p.k < 2 || p.k > 2 * ds.true_k()) continue;
            best = std::max(best, ari(p, *ds.truth));
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "snn sweep on tevc_20_60: best in-range ARI %.4f (need >= 0.90, soft)", best);
        report("4c", best >= 0.90, buf, /*soft=*/true);
    }
    (void)work;
}

// ---------------------------------------------------------------- criterion 5
void criterion5_outliers() {
    auto sd = make_overlap_pair();
    auto ds = sd.with_truth(0);
    auto nn = build_neighbor_table(ds, 10);
    auto mst = build_mst(ds);
    compute_di(mst, nn);
    split_links(mst, gamma_size_heuristic(ds.n()));
    EvalFn eval = [&](const Genotype& g) {
        auto p = decode(g);
        return Evaluated{evaluate_partition(p, CriteriaKind::VarCon, ds, nn, 10), p};
    };
    VariationOps ops;
    ops.nn = &nn;
    ops.L = 10;

    const int runs = 10;
    int with_small = 0;
    for (int r = 0; r < runs; ++r) {
        Rng rng(11100 + r);
        auto init = init_delta_mock(mst, 100, rng);
        auto set = run_nsga2(init, eval, ops, 100, 100, rng);
        auto best = best_of_set(set, *ds.truth);
        auto sizes = best.part.cluster_sizes();
        if (*std::min_element(sizes.begin(), sizes.end()) <= 5) ++with_small;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "outlier clusters: delta-MOCK best partitions with a <=5-point cluster in "
                  "%d/%d runs (need >= %d)",
                  with_small, runs, (runs + 1) / 2);
    report("5", with_small >= (runs + 1) / 2, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion6_statistics() {
    auto kw = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
    bool kw_ok = std::abs(kw.h - 27.0 / 7.0) <= 1e-6;

    // permutation oracle for the Nemenyi decisions (family-wise max statistic)
    auto perm_decisions = [](const std::vector<std::vector<double>>& groups, Rng& rng) {
        auto stats_of = [](const std::vector<std::vector<double>>& g) {
            std::vector<double> pooled;
            for (auto& grp : g) pooled.insert(pooled.end(), grp.begin(), grp.end());
            auto rank = moec::detail::midranks(pooled);
            double n = static_cast<double>(pooled.size());
            std::vector<double> mr(g.size());
            std::size_t off = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                double s = 0;
                for (std::size_t t = 0; t < g[i].size(); ++t) s += rank[off + t];
                mr[i] = s / g[i].size();
                off += g[i].size();
            }
            std::vector<std::vector<double>> st(g.size(), std::vector<double>(g.size(), 0.0));
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j) {
                    double se = std::sqrt(n * (n + 1) / 12.0 *
                                          (1.0 / g[i].size() + 1.0 / g[j].size()));
                    st[i][j] = std::abs(mr[i] - mr[j]) / se;
                }
            return st;
        };
        auto obs = stats_of(groups);
        std::vector<double> pooled;
        std::vector<std::size_t> sizes;
        for (auto& g : groups) {
            pooled.insert(pooled.end(), g.begin(), g.end());
            sizes.push_back(g.size());
        }
        const int B = 600;
        std::vector<std::vector<int>> ge(groups.size(), std::vector<int>(groups.size(), 0));
        for (int b = 0; b < B; ++b) {
            rng.shuffle(pooled);
            std::vector<std::vector<double>> pg;
            std::size_t off = 0;
            for (auto s : sizes) {
                pg.push_back(std::vector<double>(pooled.begin() + off, pooled.begin() + off + s));
                off += s;
            }
            auto ps = stats_of(pg);
            double mx = 0;
            for (auto& row : ps)
                for (double v : row) mx = std::max(mx, v);
            for (std::size_t i = 0; i < groups.size(); ++i)
                for (std::size_t j = 0; j < groups.size(); ++j)
                    if (mx >= obs[i][j]) ++ge[i][j];
        }
        std::vector<std::vector<bool>> sig(groups.size(), std::vector<bool>(groups.size(), false));
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = 0; j < groups.size(); ++j)
                if (i != j) sig[i][j] = ge[i][j] < static_cast<int>(0.05 * B);
        return sig;
    };

    Rng rng(11005);
    int agree = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<double>> groups(3);
        bool separated = t % 2 == 0;
        for (int i = 0; i < 20; ++i) {
            groups[0].push_back((separated ? 10.0 : 1.0) + rng.next_real());
            groups[1].push_back(1.0 + rng.next_real());
            groups[2].push_back(1.0 + rng.next_real());
        }
        auto nem = nemenyi_posthoc(groups);
        auto ref = perm_decisions(groups, rng);
        bool match = true;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (i != j && nem.significant(i, j) != ref[i][j]) match = false;
        agree += match;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "statistics: KW H = %.8f (want %.8f), nemenyi vs permutation oracle %d/%d "
                  "trials (need >= 95)",
                  kw.h, 27.0 / 7.0, agree, trials);
    report("6", kw_ok && agree >= 95, buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion7_determinism(const std::string& work, const DeskResult& first) {
    auto second = run_desk_suite(work, "out_repeat", first.cfg.runs);
    bool ok = true;
    std::string mismatch;
    for (auto name : {"records.csv", "table2.csv", "significance.csv"}) {
        auto a = slurp(first.out_dir + "/" + std::string(name));
        auto b = slurp(second.out_dir + "/" + std::string(name));
        if (a.empty() || a != b) {
            ok = false;
            mismatch = name;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "determinism: repeated suite reports %s%s",
                  ok ? "byte-identical" : "DIFFER at ", ok ? "" : mismatch.c_str());
    report("7", ok, buf);
}

} // namespace

int main() {
    const std::string work = "moec_acceptance_work";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work);

    auto t0 = Clock::now();
    criterion1_oracles();
    criterion2_objectives();
    auto desk = run_desk_suite(work, "out", 10);
    criterion3_table2(desk);
    criterion4_baselines(work);
    criterion5_outliers();
    criterion6_statistics();
    criterion7_determinism(work, desk);

    int hard_failures = 0, warns = 0, blocked = 0;
    for (auto& o : outcomes) {
        if (o.status == "FAIL") ++hard_failures;
        if (o.status == "WARN") ++warns;
        if (o.status == "BLOCKED") ++blocked;
    }
    std::printf("----\n%zu criteria: %d fail, %d warn, %d blocked, total %.1fs\n",
                outcomes.size(), hard_failures, warns, blocked, elapsed_s(t0));
    fs::remove_all(work, ec);
    return hard_failures;
}
