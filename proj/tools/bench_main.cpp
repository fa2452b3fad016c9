// moec-bench: config-driven benchmark runner for the three multi-objective
// clustering algorithms. Verbs: run, baselines, stats, plot-data.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "moec/moec.hpp"

namespace {

moec::Algo parse_algo(const std::string& s) {
    if (s == "mock") return moec::Algo::Mock;
    if (s == "delta-mock") return moec::Algo::DeltaMock;
    if (s == "mocle") return moec::Algo::Mocle;
    throw CLI::ValidationError("--algo", "unknown algorithm '" + s + "'");
}

struct CommonOpts {
    std::string config;
    std::string dataset_path;
    std::string dataset_name = "dataset";
    std::string labels;
    std::string label_mode = "separate";
    std::string ingest;
    std::string algos;
    std::string out;
    int runs = -1;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool full = false;
    bool header = false;
    bool normalize = false;
    bool trace = false;
    bool dump_mst = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "experiment config file");
    cmd->add_option("--dataset", o.dataset_path, "features CSV (alternative to --config)");
    cmd->add_option("--name", o.dataset_name, "dataset display name for --dataset");
    cmd->add_option("--labels", o.labels, "label file for --dataset");
    cmd->add_option("--label-mode", o.label_mode, "separate | embedded | none");
    cmd->add_option("--ingest", o.ingest, "external base-partition file for --dataset");
    cmd->add_option("--algo", o.algos, "comma list: mock,delta-mock,mocle");
    cmd->add_option("--runs", o.runs, "number of runs per dataset x algorithm");
    cmd->add_option("--seed", o.seed, "base seed")->each([&](const std::string&) {
        o.have_seed = true;
    });
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--full", o.full, "include full-scale datasets");
    cmd->add_flag("--header", o.header, "CSV has a header row to skip");
    cmd->add_flag("--normalize", o.normalize, "min-max normalize features");
    cmd->add_flag("--trace", o.trace, "write per-generation trace files");
    cmd->add_flag("--dump-mst", o.dump_mst, "write the MST/DI debug dump per dataset");
}

moec::ExperimentConfig build_config(const CommonOpts& o) {
    moec::ExperimentConfig cfg;
    if (!o.config.empty()) {
        cfg = moec::load_config(o.config);
    } else if (!o.dataset_path.empty()) {
        moec::DatasetSpec spec;
        spec.name = o.dataset_name;
        spec.path = o.dataset_path;
        spec.mode = moec::detail::parse_label_mode(o.label_mode);
        spec.label_path = o.labels;
        spec.ingest_path = o.ingest;
        spec.header = o.header;
        cfg.datasets.push_back(spec);
        cfg.runs = 30;
    } else {
        throw CLI::ValidationError("--config", "need --config or --dataset");
    }
    if (!o.algos.empty()) {
        cfg.algorithms.clear();
        for (auto& a : moec::detail::split(o.algos, ',')) cfg.algorithms.push_back(parse_algo(a));
    }
    if (o.runs > 0) cfg.runs = o.runs;
    if (o.have_seed) cfg.seed = o.seed;
    if (!o.out.empty()) cfg.out_dir = o.out;
    cfg.full = cfg.full || o.full;
    cfg.normalize = cfg.normalize || o.normalize;
    cfg.emit_trace = cfg.emit_trace || o.trace;
    cfg.dump_mst = cfg.dump_mst || o.dump_mst;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-objective evolutionary clustering benchmark"};
    app.require_subcommand(1);

    CommonOpts run_o, base_o, plot_o;
    std::string stats_records = "out/records.csv", stats_out = "out";
    std::string plot_algo = "delta-mock", plot_out = "plot.csv", plot_mode = "auto";

    auto* run_cmd = app.add_subcommand("run", "run the experiment protocol");
    add_common(run_cmd, run_o);

    auto* base_cmd = app.add_subcommand("baselines", "best in-range base partitions per method");
    add_common(base_cmd, base_o);

    auto* stats_cmd = app.add_subcommand("stats", "re-aggregate existing run records");
    stats_cmd->add_option("--records", stats_records, "records.csv from a previous run");
    stats_cmd->add_option("--out", stats_out, "output directory");

    auto* plot_cmd = app.add_subcommand("plot-data", "median-best partition point file");
    add_common(plot_cmd, plot_o);
    plot_cmd->add_option("--plot-algo", plot_algo, "algorithm to plot");
    plot_cmd->add_option("--plot-out", plot_out, "output CSV path");
    plot_cmd->add_option("--mode", plot_mode, "auto | scatter | parallel");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto cfg = build_config(run_o);
            auto result = moec::run_experiment(cfg);
            std::cout << "wrote " << cfg.out_dir << "/records.csv, table2.csv, significance.csv\n";
            for (auto& cmp : result.report.per_dataset) {
                std::cout << cmp.dataset << ": H=" << cmp.h << " p=" << cmp.p << " winners:";
                for (auto& w : cmp.winners) std::cout << ' ' << w;
                std::cout << "\n";
            }
        } else if (*base_cmd) {
            auto cfg = build_config(base_o);
            moec::run_baselines(cfg);
            std::cout << "wrote " << cfg.out_dir << "/baselines.csv\n";
        } else if (*stats_cmd) {
            moec::reaggregate(stats_records, stats_out);
            std::cout << "wrote " << stats_out << "/table2.csv, significance.csv\n";
        } else if (*plot_cmd) {
            auto cfg = build_config(plot_o);
            moec::PlotMode mode = plot_mode == "scatter"    ? moec::PlotMode::Scatter
                                  : plot_mode == "parallel" ? moec::PlotMode::ParallelCoords
                                                            : moec::PlotMode::Auto;
            moec::emit_plot_data(cfg, cfg.datasets.at(0), parse_algo(plot_algo), plot_out, mode);
            std::cout << "wrote " << plot_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
