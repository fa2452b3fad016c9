#ifndef MOEC_BENCH_HPP
#define MOEC_BENCH_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moec/base_clusterers.hpp"
#include "moec/init.hpp"
#include "moec/mocle.hpp"
#include "moec/moea.hpp"
#include "moec/mst.hpp"
#include "moec/objectives.hpp"
#include "moec/stats.hpp"

namespace moec {

struct DatasetSpec {
    std::string name;
    std::string path;
    LabelMode mode = LabelMode::SeparateFile;
    std::string label_path;
    std::string ingest_path; // external base partitions, optional
    bool header = false;
    bool full_scale = false; // only run under --full
};

struct EngineParams {
    // MOCK search (PESA-II); population/grid values reconstructed from the
    // engine's usual conventions, not published for this pipeline
    int mock_init_pop = 100;
    int mock_generations = 500;
    int mock_internal = 10;
    int mock_archive_cap = 1000;
    int mock_grid_divisions = 10;
    // delta-MOCK search (NSGA-II)
    int nsga_pop = 100;
    int nsga_generations = 100;
    // MOCLE
    int mocle_generations = 50;
    // shared variation settings
    double crossover_prob = 0.7;
    double mutation_rate = -1.0; // 1/genotype-length when negative
    bool delta_redirect = true;
    // base clusterers
    int kmeans_restarts = 10;
    int kmeans_max_iter = 100;
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<Algo> algorithms = {Algo::Mock, Algo::DeltaMock, Algo::Mocle};
    int L = 10;
    int runs = 30;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool normalize = false;
    bool full = false;
    bool emit_fronts = false;
    bool emit_trace = false;
    bool dump_mst = false;
    EngineParams engine;

    void validate() const {
        if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
        if (L < 1) throw std::invalid_argument("config: L must be >= 1");
        if (algorithms.empty()) throw std::invalid_argument("config: no algorithms declared");
        if (datasets.empty()) throw std::invalid_argument("config: no datasets declared");
    }
};

inline void normalize_minmax(Dataset& ds) {
    const int n = ds.n(), d = ds.dim;
    for (int j = 0; j < d; ++j) {
        double lo = ds.features[j], hi = ds.features[j];
        for (int i = 1; i < n; ++i) {
            double v = ds.features[static_cast<std::size_t>(i) * d + j];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double range = hi - lo;
        for (int i = 0; i < n; ++i) {
            double& v = ds.features[static_cast<std::size_t>(i) * d + j];
            v = range > 0 ? (v - lo) / range : 0.0;
        }
    }
}

namespace detail {

inline LabelMode parse_label_mode(const std::string& s) {
    if (s == "embedded" || s == "embedded-last-column") return LabelMode::EmbeddedLastColumn;
    if (s == "separate" || s == "separate-file") return LabelMode::SeparateFile;
    if (s == "none") return LabelMode::None;
    throw std::runtime_error("config: unknown label mode '" + s + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// one deterministic stream per (seed, dataset, algorithm, run) cell,
// independent of which других cells the invocation happens to include
inline std::uint64_t cell_seed(std::uint64_t base, std::size_t ds_idx, Algo algo, int run) {
    std::uint64_t h = base;
    h ^= 0x9e3779b97f4a7c15ULL + (ds_idx << 17);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= static_cast<std::uint64_t>(algo) + 0x94d049bb133111ebULL + (static_cast<std::uint64_t>(run) << 23);
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

} // namespace detail

// Flat key=value config file; '#' starts a comment. `dataset` lines repeat:
//   dataset = name, features.csv, separate|embedded|none[, label-file][, ingest-file]
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    ExperimentConfig cfg;
    cfg.algorithms.clear();
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config: bad line '" + line + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key == "dataset") {
            auto cells = detail::split(val, ',');
            if (cells.size() < 3) throw std::runtime_error("config: dataset needs name,path,mode");
            DatasetSpec spec;
            spec.name = detail::trim(cells[0]);
            spec.path = detail::trim(cells[1]);
            spec.mode = detail::parse_label_mode(detail::trim(cells[2]));
            if (cells.size() > 3) spec.label_path = detail::trim(cells[3]);
            if (cells.size() > 4) spec.ingest_path = detail::trim(cells[4]);
            if (cells.size() > 5) spec.full_scale = detail::trim(cells[5]) == "full";
            cfg.datasets.push_back(std::move(spec));
        } else if (key == "algorithms") {
            for (auto& a : detail::split(val, ',')) {
                std::string t = detail::trim(a);
                if (t == "mock")
                    cfg.algorithms.push_back(Algo::Mock);
                else if (t == "delta-mock")
                    cfg.algorithms.push_back(Algo::DeltaMock);
                else if (t == "mocle")
                    cfg.algorithms.push_back(Algo::Mocle);
                else
                    throw std::runtime_error("config: unknown algorithm '" + t + "'");
            }
        } else if (key == "L") {
            cfg.L = std::stoi(val);
        } else if (key == "runs") {
            cfg.runs = std::stoi(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "normalize") {
            cfg.normalize = val == "1" || val == "true";
        } else if (key == "emit_fronts") {
            cfg.emit_fronts = val == "1" || val == "true";
        } else if (key == "emit_trace") {
            cfg.emit_trace = val == "1" || val == "true";
        } else if (key == "dump_mst") {
            cfg.dump_mst = val == "1" || val == "true";
        } else if (key == "mock_generations") {
            cfg.engine.mock_generations = std::stoi(val);
        } else if (key == "mock_internal") {
            cfg.engine.mock_internal = std::stoi(val);
        } else if (key == "mock_archive_cap") {
            cfg.engine.mock_archive_cap = std::stoi(val);
        } else if (key == "mock_grid_divisions") {
            cfg.engine.mock_grid_divisions = std::stoi(val);
        } else if (key == "mock_init_pop") {
            cfg.engine.mock_init_pop = std::stoi(val);
        } else if (key == "nsga_pop") {
            cfg.engine.nsga_pop = std::stoi(val);
        } else if (key == "nsga_generations") {
            cfg.engine.nsga_generations = std::stoi(val);
        } else if (key == "mocle_generations") {
            cfg.engine.mocle_generations = std::stoi(val);
        } else if (key == "crossover_prob") {
            cfg.engine.crossover_prob = std::stod(val);
        } else if (key == "mutation_rate") {
            cfg.engine.mutation_rate = std::stod(val);
        } else if (key == "delta_redirect") {
            cfg.engine.delta_redirect = val == "1" || val == "true";
        } else if (key == "kmeans_restarts") {
            cfg.engine.kmeans_restarts = std::stoi(val);
        } else {
            throw std::runtime_error("config: unknown key '" + key + "'");
        }
    }
    if (cfg.algorithms.empty())
        cfg.algorithms = {Algo::Mock, Algo::DeltaMock, Algo::Mocle};
    return cfg;
}

// Everything computed once per dataset and shared by the runs.
struct PreparedDataset {
    Dataset ds;
    NeighborTable nn;
    MstModel mst;
    int k_max = 0;
    BasePartitionSet ingested;
};

inline PreparedDataset prepare_dataset(const DatasetSpec& spec, const ExperimentConfig& cfg) {
    PreparedDataset prep;
    prep.ds = load_dataset(spec.path, spec.mode, spec.label_path, spec.header);
    prep.ds.name = spec.name;
    if (cfg.normalize) normalize_minmax(prep.ds);
    prep.nn = build_neighbor_table(prep.ds, std::min(cfg.L, prep.ds.n() - 1));
    prep.mst = build_mst(prep.ds);
    compute_di(prep.mst, prep.nn);
    split_links(prep.mst, gamma_size_heuristic(prep.ds.n()));
    prep.k_max = prep.ds.truth ? std::min(2 * prep.ds.true_k(), prep.ds.n()) : 10;
    if (prep.k_max < 2) prep.k_max = 2;
    if (!spec.ingest_path.empty()) prep.ingested = ingest_partitions(spec.ingest_path, prep.ds.n());
    return prep;
}

struct SingleRunResult {
    ApproximationSet set;
    double wall_seconds = 0.0;
};

// One clustering-phase execution of one algorithm.
inline SingleRunResult run_algorithm(Algo algo, const PreparedDataset& prep,
                                     const ExperimentConfig& cfg, std::uint64_t seed,
                                     std::ostream* trace = nullptr) {
    const Dataset& ds = prep.ds;
    const NeighborTable& nn = prep.nn;
    const int L = std::min(cfg.L, nn.l_max);
    GenerationHook hook = trace ? trace_to_stream(*trace) : GenerationHook{};

    EvalFn eval = [&, algo](const Genotype& g) {
        auto p = decode(g);
        return Evaluated{evaluate_partition(p, criteria_of(algo), ds, nn, L), p};
    };
    VariationOps ops;
    ops.crossover_prob = cfg.engine.crossover_prob;
    ops.mutation_rate = cfg.engine.mutation_rate;
    ops.nn = &nn;
    ops.L = L;
    ops.delta_redirect = cfg.engine.delta_redirect;

    auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    SingleRunResult out;
    if (algo == Algo::Mock) {
        auto init = init_mock(ds, prep.mst, nn, cfg.engine.mock_init_pop, prep.k_max, rng);
        out.set = run_pesa2(init, eval, ops, cfg.engine.mock_generations, cfg.engine.mock_internal,
                            cfg.engine.mock_archive_cap, cfg.engine.mock_grid_divisions, rng, hook);
    } else if (algo == Algo::DeltaMock) {
        auto init = init_delta_mock(prep.mst, cfg.engine.nsga_pop, rng);
        out.set = run_nsga2(init, eval, ops, cfg.engine.nsga_generations, cfg.engine.nsga_pop, rng,
                            hook);
    } else {
        auto base = sweep_base_partitions(ds, prep.ds.truth ? prep.ds.true_k() : 5, rng,
                                          cfg.engine.kmeans_restarts, cfg.engine.kmeans_max_iter);
        for (const auto& bp : prep.ingested.partitions) {
            if (bp.part.k >= 2 && bp.part.k <= prep.k_max) base.partitions.push_back(bp);
        }
        if (base.partitions.size() < 2)
            throw std::runtime_error("mocle: fewer than 2 base partitions for " + ds.name);
        out.set = run_mocle(base, ds, nn, L, cfg.engine.mocle_generations, rng);
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    out.set.run_meta.seed = seed;
    out.set.run_meta.algorithm = algo_name(algo);
    out.set.run_meta.set("L", std::to_string(L));
    out.set.run_meta.set("k_max", std::to_string(prep.k_max));
    out.set.run_meta.set("gamma_size", std::to_string(prep.mst.gamma.size()));
    out.set.run_meta.set("normalize", cfg.normalize ? "1" : "0");
    out.set.run_meta.set("delta_redirect", cfg.engine.delta_redirect ? "1" : "0");
    out.set.run_meta.set("phase1_rule", "top-di-ties-randomized"); // reconstructed
    out.set.run_meta.set("pesa_params", "reconstructed");
    return out;
}

struct ExperimentResult {
    std::vector<RunRecord> records;
    ComparisonReport report;
};

namespace detail {

inline void write_records_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream os(path);
    os << "dataset,algorithm,seed,best_ari,best_k\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.6f", r.best_ari);
        os << r.dataset << ',' << r.algorithm << ',' << r.seed << ',' << buf << ',' << r.best_k
           << '\n';
    }
}

inline void write_table_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    std::ofstream os(path);
    os << "dataset,algorithm,mean_ari,std_ari,mean_k,runs\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.1f", r.mean_ari, r.std_ari, r.mean_k);
        os << r.dataset << ',' << r.algorithm << ',' << buf << ',' << r.runs << '\n';
    }
}

inline void write_significance_csv(const ComparisonReport& report, const std::string& path) {
    std::ofstream os(path);
    os << "dataset,kw_h,kw_p,algorithm_a,algorithm_b,nemenyi_p,significant_at_0.05\n";
    char buf[128];
    for (const auto& cmp : report.per_dataset) {
        for (std::size_t i = 0; i < cmp.algorithms.size(); ++i)
            for (std::size_t j = i + 1; j < cmp.algorithms.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.4f,%.6f", cmp.h, cmp.p);
                os << cmp.dataset << ',' << buf << ',' << cmp.algorithms[i] << ','
                   << cmp.algorithms[j] << ',';
                std::snprintf(buf, sizeof buf, "%.6f", cmp.posthoc.p[i][j]);
                os << buf << ',' << (cmp.posthoc.significant(i, j) ? 1 : 0) << '\n';
            }
    }
}

inline void write_front_csv(const ApproximationSet& set, const std::string& path) {
    std::ofstream os(path);
    os << "compactness,connectedness,k\n";
    char buf[96];
    for (const auto& m : set.members) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d", m.obj.compactness, m.obj.connectedness,
                      m.part.k);
        os << buf << '\n';
    }
}

} // namespace detail

// The full protocol: every dataset x algorithm x run, then aggregation and
// the nonparametric comparison. Wall-clock timings go to the console only,
// so the emitted files depend on nothing but config and seeds.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    ExperimentResult result;
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
        const auto& spec = cfg.datasets[di];
        if (spec.full_scale && !cfg.full) {
            log << "[skip] " << spec.name << " (full-scale; pass --full to run)\n";
            continue;
        }
        auto prep = prepare_dataset(spec, cfg);
        if (cfg.dump_mst) {
            std::ofstream mos(cfg.out_dir + "/mst_" + spec.name + ".csv");
            dump_mst_csv(prep.mst, mos);
        }
        bool ari_mode = prep.ds.truth.has_value();
        if (!ari_mode)
            log << "[note] " << spec.name
                << ": no ground truth; running objective-only mode (fronts, no ARI)\n";
        log << "[data] " << spec.name << ": n=" << prep.ds.n() << " d=" << prep.ds.dim
            << " k*=" << prep.ds.true_k() << " |gamma|=" << prep.mst.gamma.size() << "\n";

        for (Algo algo : cfg.algorithms) {
            for (int r = 0; r < cfg.runs; ++r) {
                std::uint64_t seed = detail::cell_seed(cfg.seed, di, algo, r);
                std::ofstream trace_os;
                if (cfg.emit_trace && algo != Algo::Mocle) {
                    trace_os.open(cfg.out_dir + "/trace_" + spec.name + "_" + algo_name(algo) +
                                  "_run" + std::to_string(r) + ".csv");
                }
                auto run = run_algorithm(algo, prep, cfg, seed,
                                         trace_os.is_open() ? &trace_os : nullptr);
                if (cfg.emit_fronts || !ari_mode) {
                    std::string fp = cfg.out_dir + "/front_" + spec.name + "_" +
                                     algo_name(algo) + "_run" + std::to_string(r) + ".csv";
                    detail::write_front_csv(run.set, fp);
                }
                if (ari_mode) {
                    auto best = best_of_set(run.set, *prep.ds.truth);
                    RunRecord rec;
                    rec.dataset = spec.name;
                    rec.algorithm = algo_name(algo);
                    rec.seed = seed;
                    rec.best_ari = best.ari_value;
                    rec.best_k = best.k;
                    rec.wall_seconds = run.wall_seconds;
                    result.records.push_back(rec);
                    log << "[run] " << spec.name << " " << algo_name(algo) << " run " << r
                        << ": best ARI " << best.ari_value << " (k=" << best.k << ") in "
                        << run.wall_seconds << "s\n";
                } else {
                    log << "[run] " << spec.name << " " << algo_name(algo) << " run " << r
                        << ": front size " << run.set.members.size() << " in "
                        << run.wall_seconds << "s\n";
                }
            }
        }
    }

    if (!result.records.empty()) {
        detail::write_records_csv(result.records, cfg.out_dir + "/records.csv");
        auto rows = aggregate_runs(result.records);
        detail::write_table_csv(rows, cfg.out_dir + "/table2.csv");
        result.report = compare_algorithms(result.records);
        detail::write_significance_csv(result.report, cfg.out_dir + "/significance.csv");
    }
    return result;
}

// Re-aggregate previously persisted run records.
inline void reaggregate(const std::string& records_path, const std::string& out_dir) {
    std::ifstream in(records_path);
    if (!in) throw std::runtime_error("cannot open " + records_path);
    std::string line;
    std::getline(in, line); // header
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = detail::split(line, ',');
        if (cells.size() != 5) throw std::runtime_error("records: bad row '" + line + "'");
        RunRecord r;
        r.dataset = cells[0];
        r.algorithm = cells[1];
        r.seed = std::stoull(cells[2]);
        r.best_ari = std::stod(cells[3]);
        r.best_k = std::stoi(cells[4]);
        records.push_back(r);
    }
    std::filesystem::create_directories(out_dir);
    detail::write_table_csv(aggregate_runs(records), out_dir + "/table2.csv");
    detail::write_significance_csv(compare_algorithms(records), out_dir + "/significance.csv");
}

// Table-3-style baselines: best in-range partition per base method.
inline void run_baselines(const ExperimentConfig& cfg, std::ostream& log = std::cout) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream os(cfg.out_dir + "/baselines.csv");
    os << "dataset,method,best_ari,k\n";
    char buf[64];
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
        const auto& spec = cfg.datasets[di];
        if (spec.full_scale && !cfg.full) {
            log << "[skip] " << spec.name << " (full-scale)\n";
            continue;
        }
        auto prep = prepare_dataset(spec, cfg);
        if (!prep.ds.truth) {
            log << "[skip] " << spec.name << " (baselines need ground truth)\n";
            continue;
        }
        Rng rng(detail::cell_seed(cfg.seed, di, Algo::Mocle, 9999));
        auto base = sweep_base_partitions(prep.ds, prep.ds.true_k(), rng,
                                          cfg.engine.kmeans_restarts, cfg.engine.kmeans_max_iter);
        for (const auto& bp : prep.ingested.partitions) base.partitions.push_back(bp);
        std::map<std::string, std::pair<double, int>> best;
        for (const auto& bp : base.partitions) {
            if (bp.part.k < 2 || bp.part.k > prep.k_max) continue;
            double a = ari(bp.part, *prep.ds.truth);
            auto it = best.find(bp.source);
            if (it == best.end() || a > it->second.first) best[bp.source] = {a, bp.part.k};
        }
        for (const auto& [method, val] : best) {
            std::snprintf(buf, sizeof buf, "%.3f", val.first);
            os << spec.name << ',' << method << ',' << buf << ',' << val.second << '\n';
            log << "[baseline] " << spec.name << " " << method << ": " << val.first
                << " (k=" << val.second << ")\n";
        }
        for (const auto& w : base.warnings) log << "[warn] " << spec.name << ": " << w << "\n";
    }
}

enum class PlotMode { Auto, Scatter, ParallelCoords };

// Scatter (d=2) or parallel-coordinates point file for the median-best run:
// runs are sorted by best ARI and the lower median is taken.
inline void emit_plot_data(const ExperimentConfig& cfg, const DatasetSpec& spec, Algo algo,
                           const std::string& out_path, PlotMode mode = PlotMode::Auto,
                           std::ostream& log = std::cout) {
    auto prep = prepare_dataset(spec, cfg);
    if (!prep.ds.truth) throw std::runtime_error("plot-data needs ground truth labels");
    if (mode == PlotMode::Auto)
        mode = prep.ds.dim == 2 ? PlotMode::Scatter : PlotMode::ParallelCoords;
    if (mode == PlotMode::Scatter && prep.ds.dim != 2)
        throw std::runtime_error("plot-data: scatter mode needs d = 2");
    std::size_t di = 0;
    for (; di < cfg.datasets.size(); ++di)
        if (cfg.datasets[di].name == spec.name) break;
    if (di == cfg.datasets.size()) di = 0;

    std::vector<std::pair<double, Partition>> bests;
    for (int r = 0; r < cfg.runs; ++r) {
        std::uint64_t seed = detail::cell_seed(cfg.seed, di, algo, r);
        auto run = run_algorithm(algo, prep, cfg, seed);
        auto best = best_of_set(run.set, *prep.ds.truth);
        bests.push_back({best.ari_value, best.part});
        log << "[plot-data] run " << r << " best ARI " << best.ari_value << "\n";
    }
    std::stable_sort(bests.begin(), bests.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto& median = bests[(bests.size() - 1) / 2]; // lower median
    log << "[plot-data] median-best ARI " << median.first << " k=" << median.second.k << "\n";

    std::ofstream os(out_path);
    const Dataset& ds = prep.ds;
    char buf[64];
    if (mode == PlotMode::Scatter) {
        os << "x,y,cluster\n";
        for (int i = 0; i < ds.n(); ++i) {
            auto p = ds.point(i);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", p[0], p[1]);
            os << buf << ',' << median.second.assign[i] << '\n';
        }
    } else {
        for (int j = 0; j < ds.dim; ++j) os << 'f' << (j + 1) << ',';
        os << "cluster\n";
        for (int i = 0; i < ds.n(); ++i) {
            auto p = ds.point(i);
            for (int j = 0; j < ds.dim; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", p[j]);
                os << buf << ',';
            }
            os << median.second.assign[i] << '\n';
        }
    }
}

} // namespace moec

#endif
