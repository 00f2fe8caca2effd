#include "cli.hpp"

#include "hdgc/design.hpp"
#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"
#include "hdgc/forecast.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/io.hpp"
#include "hdgc/simulation.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace hdgc::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.3.0";

struct Common {
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::string out = "hdgc-out";
    bool full = false;
};

struct DataOptions {
    std::string data;
    std::string target;
    std::string blocks;
    int difference = 0;
    int p_max = 2;
};

struct TestOptions {
    std::size_t b = 500;
    std::size_t b_cov = 200;
    double alpha = 0.05;
};

struct SimulateOptions {
    std::vector<int> designs{1};
    std::string test = "granger_lasso";
    std::vector<double> alphas{0.05};
    std::optional<std::size_t> n;
    std::optional<std::size_t> b;
    std::size_t b_cov = 200;
    std::size_t m = 101;
    bool curve = false;
    int p_max = 2;
};

struct ForecastOptions {
    std::optional<std::size_t> S;
    double alpha = 0.01;
    std::size_t b = 200;
    std::size_t b_cov = 200;
    bool select_once = false;
};

/// Response and predictors ready for fitting, plus provenance for the manifest.
struct Prepared {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    std::vector<std::string> x_labels;
    BlockStructure blocks;
    std::string target;
};

Prepared prepare(const DataOptions& opt, bool centered) {
    TimeSeriesPanel panel = read_panel_csv(opt.data);
    if (panel.cols() < 2) throw ArgumentError(opt.data + ": need a target column and at least one predictor");
    if (opt.difference > 0) panel = difference(panel, opt.difference);
    if (centered) panel = center(panel).first;

    const std::string target = opt.target.empty() ? panel.labels().front() : opt.target;
    const auto target_col = panel.find(target);
    if (!target_col) throw ArgumentError(opt.data + ": no column named '" + target + "'");
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < panel.cols(); ++j) {
        if (j != *target_col) others.push_back(j);
    }
    const TimeSeriesPanel xs = panel.select_columns(others);

    std::optional<BlockStructure> blocks;
    if (opt.blocks.empty()) {
        // One block per predictor series.
        std::vector<Block> singles;
        for (std::size_t j = 0; j < xs.cols(); ++j) singles.push_back(Block{xs.labels()[j], {j}});
        blocks.emplace(std::move(singles), xs.cols());
    } else {
        blocks.emplace(read_block_map(opt.blocks, xs.labels()));
    }
    return Prepared{panel.column(*target_col), xs.values(), xs.labels(), std::move(*blocks), target};
}

class Outputs {
public:
    Outputs(const std::string& dir, std::string command, const Common& common)
        : dir_(dir), command_(std::move(command)), common_(common) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw ArgumentError("cannot create output directory " + dir);
    }

    std::ofstream open(const std::string& name) {
        std::ofstream file(dir_ / name, std::ios::binary);
        if (!file) throw ArgumentError("cannot write " + (dir_ / name).string());
        files_.push_back(name);
        return file;
    }

    void manifest(const json& config) {
        json m;
        m["tool"] = "hdgc";
        m["version"] = kVersion;
        m["command"] = command_;
        m["seed"] = common_.seed;
        m["jobs"] = common_.jobs;
        m["full"] = common_.full;
        m["config"] = config;
        m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)},
                          {"boost", std::to_string(BOOST_VERSION / 100000) + "." +
                                        std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                                        std::to_string(BOOST_VERSION % 100)}};
        m["outputs"] = files_;
        std::ofstream file(dir_ / "manifest.json", std::ios::binary);
        if (!file) throw ArgumentError("cannot write " + (dir_ / "manifest.json").string());
        file << m.dump(2) << '\n';
    }

    [[nodiscard]] const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::string command_;
    const Common& common_;
    std::vector<std::string> files_;
};

json data_config(const DataOptions& d) {
    return json{{"data", d.data}, {"target", d.target}, {"blocks", d.blocks}, {"difference", d.difference},
                {"p_max", d.p_max}};
}

std::string block_names(const BlockStructure& blocks, std::span<const BlockId> ids) {
    std::string out;
    for (BlockId id : ids) {
        if (!out.empty()) out += ';';
        out += blocks[id].name;
    }
    return out;
}

std::string series_label(const Prepared& data, const ColumnInfo& info) {
    return info.kind == ColumnKind::own_lag ? data.target : data.x_labels[info.source];
}

void run_fit(const Common& common, const DataOptions& opt, std::ostream& out) {
    const Prepared data = prepare(opt, true);
    const SelectedModel model = select_arx(data.y, data.x, data.blocks, opt.p_max);
    const std::vector<BlockId> selected = blocks_with_nonzero(model.design, model.fit.beta);

    Outputs files(common.out, "fit", common);
    {
        auto csv = files.open("coefficients.csv");
        csv << "column,series,kind,lag,block,beta,weight\n";
        for (std::size_t c = 0; c < model.design.cols(); ++c) {
            const ColumnInfo& info = model.design.columns()[c];
            const auto i = static_cast<Eigen::Index>(c);
            csv << c << ',' << series_label(data, info) << ','
                << (info.kind == ColumnKind::own_lag ? "own_lag" : "predictor") << ',' << info.lag << ','
                << (info.block ? data.blocks[*info.block].name : "") << ',' << format_number(model.fit.beta(i))
                << ',' << format_number(model.fit.weights(i)) << '\n';
        }
    }
    json summary{{"target", data.target},
                 {"p", model.p},
                 {"lambda", model.fit.lambda},
                 {"ridge_lambda", model.fit.ridge_lambda},
                 {"df", model.fit.df},
                 {"bic", model.fit.bic},
                 {"sigma2", model.fit.sigma2},
                 {"rows", model.design.rows()},
                 {"selected_blocks", json::array()}};
    for (BlockId id : selected) summary["selected_blocks"].push_back(data.blocks[id].name);
    files.open("fit.json") << summary.dump(2) << '\n';
    files.manifest(data_config(opt));
    out << "p=" << model.p << " lambda=" << format_number(model.fit.lambda) << " df=" << model.fit.df
        << " selected blocks: " << block_names(data.blocks, selected) << '\n';
}

void run_test(const Common& common, const DataOptions& opt, const TestOptions& test, std::ostream& out) {
    const Prepared data = prepare(opt, true);
    GrangerTestOptions options;
    options.replicates = test.b;
    options.covariance_replicates = test.b_cov;
    options.p_max = opt.p_max;
    options.jobs = common.jobs;
    const auto ids = data.blocks.ids();
    const auto results =
        granger_lasso_tests(data.y, data.x, data.blocks, ids, options, derive_seed(common.seed, {tag::test_command}));

    Outputs files(common.out, "test", common);
    auto csv = files.open("tests.csv");
    auto jsonl = files.open("tests.jsonl");
    csv << "block,Q,mid_p,B,p,lambda,significant\n";
    for (const GrangerTestResult& r : results) {
        const bool significant = r.mid_p < test.alpha;
        csv << r.block_name << ',' << format_number(r.Q) << ',' << format_number(r.mid_p) << ',' << r.B << ','
            << r.p_used << ',' << format_number(r.lambda_used) << ',' << (significant ? 1 : 0) << '\n';
        jsonl << json{{"block", r.block_name}, {"Q", r.Q},     {"mid_p", r.mid_p},
                      {"B", r.B},              {"p", r.p_used}, {"lambda", r.lambda_used}}
                     .dump()
              << '\n';
        out << r.block_name << ": Q=" << format_number(r.Q) << " mid_p=" << format_number(r.mid_p) << '\n';
    }
    json config = data_config(opt);
    config["B"] = test.b;
    config["B_cov"] = test.b_cov;
    config["alpha"] = test.alpha;
    files.manifest(config);
}

void run_simulate(const Common& common, const SimulateOptions& opt, std::ostream& out) {
    const std::size_t runs = opt.n.value_or(common.full ? 1000 : 500);
    const std::size_t B = opt.b.value_or(common.full ? 500 : 200);
    if (runs < 1) throw ArgumentError("--n must be at least 1");
    std::vector<TestKind> tests;
    if (opt.test == "granger_lasso" || opt.test == "both") tests.push_back(TestKind::granger_lasso);
    if (opt.test == "wald" || opt.test == "both") tests.push_back(TestKind::wald);

    MonteCarloOptions mc;
    mc.test.replicates = B;
    mc.test.covariance_replicates = opt.b_cov;
    mc.test.p_max = opt.p_max;
    mc.jobs = common.jobs;

    Outputs files(common.out, "simulate", common);
    auto size_csv = files.open("size.csv");
    size_csv << "design,T,k,test,alpha,N,B,size\n";
    for (int number : opt.designs) {
        const SimulationDesign design = builtin_design(number);
        const Seed design_seed = derive_seed(common.seed, {tag::simulate, static_cast<std::uint64_t>(number)});
        for (TestKind kind : tests) {
            const char* name = kind == TestKind::wald ? "wald" : "granger_lasso";
            std::optional<std::vector<double>> p_null;
            std::optional<std::vector<double>> p_alt;
            try {
                p_null = simulate_pvalues(design, Hypothesis::null, kind, runs, mc, design_seed);
                if (opt.curve) p_alt = simulate_pvalues(design, Hypothesis::alternative, kind, runs, mc, design_seed);
            } catch (const NotComputableError&) {
            }
            for (double alpha : opt.alphas) {
                const std::string size = p_null ? format_number(rejection_rate(*p_null, alpha)) : "NA";
                size_csv << number << ',' << design.T << ',' << design.k << ',' << name << ','
                         << format_number(alpha) << ',' << runs << ',' << (kind == TestKind::wald ? 0 : B) << ','
                         << size << '\n';
                out << "design " << number << ' ' << name << " alpha=" << format_number(alpha) << " size=" << size
                    << '\n';
            }
            if (!p_null) continue;
            const std::string stem = "design" + std::to_string(number) + "_" + name;
            auto pcsv = files.open(stem + "_pvalues.csv");
            pcsv << "run,p_h0" << (p_alt ? ",p_ha" : "") << '\n';
            for (std::size_t j = 0; j < runs; ++j) {
                pcsv << j << ',' << format_number((*p_null)[j]);
                if (p_alt) pcsv << ',' << format_number((*p_alt)[j]);
                pcsv << '\n';
            }
            if (p_alt) {
                auto ccsv = files.open(stem + "_curve.csv");
                ccsv << "x,f_h0,f_ha\n";
                for (const CurvePoint& pt : size_power_curve(*p_null, *p_alt, opt.m)) {
                    ccsv << format_number(pt.x) << ',' << format_number(pt.f_null) << ',' << format_number(pt.f_alt)
                         << '\n';
                }
            }
        }
    }
    files.manifest(json{{"designs", opt.designs},
                        {"test", opt.test},
                        {"alphas", opt.alphas},
                        {"N", runs},
                        {"B", B},
                        {"B_cov", opt.b_cov},
                        {"p_max", opt.p_max},
                        {"curve", opt.curve},
                        {"m", opt.m}});
}

void run_forecast(const Common& common, const DataOptions& opt, const ForecastOptions& fo, std::ostream& out) {
    const Prepared data = prepare(opt, false);
    const auto T = static_cast<std::size_t>(data.y.size());
    const std::size_t S = fo.S.value_or(default_window(T));

    ForecastConfig config;
    config.p_max = opt.p_max;
    config.alpha = fo.alpha;
    config.replicates = fo.b;
    config.covariance_replicates = fo.b_cov;
    config.select_once = fo.select_once;
    config.jobs = common.jobs;
    const ForecastReport report = forecast_grid(data.y, data.x, data.blocks, S, config, common.seed, data.target);

    Outputs files(common.out, "forecast", common);
    {
        auto csv = files.open("mafe.csv");
        csv << "selection";
        for (Estimator e : all_estimators) csv << ',' << to_string(e);
        csv << '\n';
        for (Selection s : all_selections) {
            csv << to_string(s);
            for (Estimator e : all_estimators) {
                const auto& mafe = report.cell(s, e).mafe;
                csv << ',' << (mafe ? format_number(*mafe) : "NA");
            }
            csv << '\n';
        }
    }
    {
        auto csv = files.open("paths.csv");
        csv << "row,actual";
        for (const ForecastCell& c : report.cells) csv << ',' << to_string(c.selection) << ':' << to_string(c.estimator);
        csv << '\n';
        for (std::size_t w = 0; w < report.actual.size(); ++w) {
            csv << report.target_rows[w] << ',' << format_number(report.actual[w]);
            for (const ForecastCell& c : report.cells) csv << ',' << format_number(c.path[w]);
            csv << '\n';
        }
    }
    {
        auto log = files.open("selections.jsonl");
        for (std::size_t w = 0; w < report.actual.size(); ++w) {
            for (const SelectionLog& s : report.selections) {
                json rec{{"window", w}, {"target_row", report.target_rows[w]}, {"selection", to_string(s.selection)}};
                if (s.windows[w]) {
                    rec["blocks"] = json::array();
                    for (BlockId id : *s.windows[w]) rec["blocks"].push_back(data.blocks[id].name);
                } else {
                    rec["blocks"] = nullptr;
                }
                log << rec.dump() << '\n';
            }
        }
    }
    json cfg = data_config(opt);
    cfg["S"] = S;
    cfg["alpha"] = fo.alpha;
    cfg["B"] = fo.b;
    cfg["B_cov"] = fo.b_cov;
    cfg["select_once"] = fo.select_once;
    files.manifest(cfg);
    for (Selection s : all_selections) {
        out << to_string(s) << ':';
        for (Estimator e : all_estimators) {
            const auto& mafe = report.cell(s, e).mafe;
            out << ' ' << (mafe ? format_number(*mafe) : "NA");
        }
        out << '\n';
    }
}

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--seed", common.seed, "Master random seed")->capture_default_str();
    cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--out", common.out, "Output directory")->capture_default_str();
    cmd->add_flag("--full", common.full, "Larger replicate counts (N = 1000, B = 500)");
}

void add_data(CLI::App* cmd, DataOptions& data) {
    cmd->add_option("--data", data.data, "Panel CSV (header row of series labels)")->required();
    cmd->add_option("--target", data.target, "Response column (default: first column)");
    cmd->add_option("--blocks", data.blocks, "Block map file (default: one block per series)");
    cmd->add_option("--difference", data.difference, "Difference the panel this many times")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--p-max", data.p_max, "Largest lag order considered")->check(CLI::PositiveNumber)
        ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Granger causality testing and forecasting with the adaptive lasso"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    DataOptions data;
    TestOptions test;
    SimulateOptions sim;
    ForecastOptions fc;

    auto* fit_cmd = app.add_subcommand("fit", "Fit the adaptive lasso ARX model");
    add_common(fit_cmd, common);
    add_data(fit_cmd, data);

    auto* test_cmd = app.add_subcommand("test", "Granger lasso test for every block");
    add_common(test_cmd, common);
    add_data(test_cmd, data);
    test_cmd->add_option("--b", test.b, "Null bootstrap replicates")->check(CLI::PositiveNumber);
    test_cmd->add_option("--b-cov", test.b_cov, "Covariance bootstrap replicates")->check(CLI::Range(50, 1000000));
    test_cmd->add_option("--alpha", test.alpha, "Level for the significant column")->check(CLI::Range(0.0, 1.0));

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo size and size-power curves");
    add_common(sim_cmd, common);
    sim_cmd->add_option("--design", sim.designs, "Design numbers 1..4")->check(CLI::Range(1, 4));
    sim_cmd->add_option("--test", sim.test, "granger_lasso, wald or both")
        ->check(CLI::IsMember({"granger_lasso", "wald", "both"}));
    sim_cmd->add_option("--alpha", sim.alphas, "Nominal levels")->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--n", sim.n, "Simulation runs (default 500, 1000 with --full)");
    sim_cmd->add_option("--b", sim.b, "Null bootstrap replicates (default 200, 500 with --full)");
    sim_cmd->add_option("--b-cov", sim.b_cov, "Covariance bootstrap replicates")->check(CLI::Range(50, 1000000));
    sim_cmd->add_option("--p-max", sim.p_max, "Largest lag order considered")->check(CLI::PositiveNumber);
    sim_cmd->add_flag("--curve", sim.curve, "Also simulate the alternative and write size-power curves");
    sim_cmd->add_option("--m", sim.m, "Curve grid points")->check(CLI::Range(2, 100000));

    auto* fc_cmd = app.add_subcommand("forecast", "Rolling-window forecast comparison");
    add_common(fc_cmd, common);
    add_data(fc_cmd, data);
    fc_cmd->add_option("--S", fc.S, "Window size (default floor(0.9 T))");
    fc_cmd->add_option("--alpha", fc.alpha, "Level of the selection tests")->check(CLI::Range(0.0, 1.0));
    fc_cmd->add_option("--b", fc.b, "Null bootstrap replicates per window")->check(CLI::PositiveNumber);
    fc_cmd->add_option("--b-cov", fc.b_cov, "Covariance bootstrap replicates per window")
        ->check(CLI::Range(50, 1000000));
    fc_cmd->add_flag("--select-once", fc.select_once, "Select blocks on the first window only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*fit_cmd) {
            run_fit(common, data, out);
        } else if (*test_cmd) {
            if (common.full && test_cmd->count("--b") == 0) test.b = 500;
            run_test(common, data, test, out);
        } else if (*sim_cmd) {
            run_simulate(common, sim, out);
        } else if (*fc_cmd) {
            run_forecast(common, data, fc, out);
        }
    } catch (const std::exception& e) {
        err << "hdgc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"hdgc"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hdgc::cli
