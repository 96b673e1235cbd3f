// golu-lab: every experiment of the library behind one seeded command line.
//
// Each run writes its artifacts plus manifest.json into --out. The manifest
// holds the fully resolved configuration, so `golu-lab --config
// out/manifest.json <command>` repeats the run.
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.

#include <golu/golu.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace golu;

#ifndef GOLU_LAB_VERSION
#define GOLU_LAB_VERSION "dev"
#endif

namespace {

// Raised when a run completes but its built-in check does not hold.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config files for CLI11. Top-level keys are global options, nested
// objects hold subcommand options. A manifest is accepted as well: its
// "config" member is used.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return dump_app(app, default_also).dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (j.is_object() && j.contains("command") && j.contains("config")) {
            j = j["config"];
        }
        if (!j.is_object()) {
            throw CLI::ConversionError("config must be a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

    static json dump_app(const CLI::App* app, bool default_also) {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            const std::string name = opt->get_lnames()[0];
            if (name == "help" || name == "version" || name == "config") {
                continue;
            }
            if (opt->get_type_size() == 0) {
                if (opt->count() > 0 || default_also) {
                    j[name] = opt->count() > 0;
                }
                continue;
            }
            std::vector<std::string> values = opt->results();
            if (values.empty()) {
                if (!default_also) {
                    continue;
                }
                std::string d = opt->get_default_str();
                if (d.size() >= 2 && d.front() == '[' && d.back() == ']') {
                    d = d.substr(1, d.size() - 2);
                }
                values = d == "{}" ? std::vector<std::string>{} : CLI::detail::split_up(d, ',');
            }
            // Unset options without a default stay out so the config reloads cleanly.
            if (values.empty() || (values.size() == 1 && values.front().empty())) {
                continue;
            }
            if (opt->get_expected_max() > 1) {
                j[name] = values;
            } else {
                j[name] = values.empty() ? std::string() : values.front();
            }
        }
        for (const CLI::App* sub : app->get_subcommands()) {
            j[sub->get_name()] = dump_app(sub, default_also);
        }
        return j;
    }

private:
    static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    static void collect(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto p = parents;
                p.push_back(it.key());
                collect(*it, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array()) {
                for (const auto& v : *it) {
                    item.inputs.push_back(scalar(v));
                }
            } else if (it->is_boolean()) {
                item.inputs = {it->get<bool>() ? "true" : "false"};
            } else {
                item.inputs = {scalar(*it)};
            }
            out.push_back(std::move(item));
        }
    }
};

struct Globals {
    std::uint64_t seed = 42;
    std::string out = "golu-lab-out";
    std::string precision = "f64";
};

fs::path out_file(const Globals& g, const std::string& name) { return fs::path(g.out) / name; }

std::ofstream open_out(const Globals& g, const std::string& name) {
    std::ofstream os(out_file(g, name), std::ios::binary);
    if (!os) {
        throw DataError("cannot write " + out_file(g, name).string());
    }
    os.imbue(std::locale::classic());
    return os;
}

void write_json(const Globals& g, const std::string& name, const json& j) {
    auto os = open_out(g, name);
    os << j.dump(2) << '\n';
}

ActivationKind kind_arg(const std::string& name) {
    const auto k = parse_activation(name);
    if (!k) {
        throw UsageError("unknown activation '" + name + "'");
    }
    return *k;
}

std::vector<ActivationKind> kinds_arg(const std::vector<std::string>& names) {
    if (names.size() == 1 && names.front() == "all") {
        return all_activations();
    }
    if (names.size() == 1 && names.front() == "compared") {
        return compared_activations();
    }
    std::vector<ActivationKind> out;
    for (const auto& n : names) {
        out.push_back(kind_arg(n));
    }
    return out;
}

const CLI::Validator kKindNames = CLI::Validator(
    [](std::string& s) -> std::string {
        if (s == "all" || s == "compared" || parse_activation(s)) {
            return {};
        }
        return "unknown activation '" + s + "'";
    },
    "ACTIVATION", "activation");

// --- training options shared by train, landscape and weights -----------------

struct TrainOpts {
    std::string task = "moons";
    std::size_t train_points = 500;
    std::size_t test_points = 500;
    double noise = 0.1;
    std::vector<std::size_t> hidden{32, 32};
    TrainConfig cfg;

    void add(CLI::App* sub) {
        sub->add_option("--task", task, "Synthetic task")->check(CLI::IsMember({"moons", "rings"}));
        sub->add_option("--train-points", train_points, "Training set size")->check(CLI::PositiveNumber);
        sub->add_option("--test-points", test_points, "Held-out set size")->check(CLI::PositiveNumber);
        sub->add_option("--noise", noise, "Gaussian noise on the points")->check(CLI::NonNegativeNumber);
        sub->add_option("--hidden", hidden, "Hidden layer widths")->delimiter(',')->expected(1, 16);
        sub->add_option("--epochs", cfg.epochs, "Epochs");
        sub->add_option("--lr", cfg.lr, "Learning rate");
        sub->add_option("--momentum", cfg.momentum, "Heavy-ball momentum");
        sub->add_option("--weight-decay", cfg.weight_decay, "L2 weight decay");
        sub->add_option("--batch", cfg.batch_size, "Minibatch size");
    }

    SyntheticTask synthetic() const {
        return SyntheticTask{*parse_task(task), train_points, test_points, noise};
    }

    TrainResult run(const ActivationKind& kind, std::uint64_t seed) const {
        TrainConfig c = cfg;
        c.seed = seed;
        return golu::train(mlp(2, hidden, 2, kind), synthetic(), c);
    }
};

json curve_summary(const TrainResult& r) {
    const CurvePoint& last = r.curve.back();
    return json{{"epochs", last.epoch},
                {"train_loss", last.train_loss},
                {"eval_loss", last.eval_loss},
                {"accuracy", last.accuracy},
                {"eval_accuracy", last.eval_accuracy},
                {"params", r.net.param_count()}};
}

// --- subcommands -------------------------------------------------------------

struct GradcheckCmd {
    std::vector<std::string> kinds{"golu"};
    std::string arch = "mlp";
    double eps = 1e-5;
    double tolerance = 1e-5;
    std::size_t max_params = 0;
    std::size_t batch = 16;

    void add(CLI::App* sub) {
        sub->add_option("--kind", kinds, "Activation(s), or all")->delimiter(',')->check(kKindNames);
        sub->add_option("--arch", arch, "Network shape")->check(CLI::IsMember({"mlp", "conv"}));
        sub->add_option("--eps", eps, "Central-difference step");
        sub->add_option("--tolerance", tolerance, "Largest accepted relative error");
        sub->add_option("--max-params", max_params, "Check a random subset of this size (0 = all)");
        sub->add_option("--batch", batch, "Batch size")->check(CLI::PositiveNumber);
    }

    void run(const Globals& g) const {
        json reports = json::array();
        bool ok = true;
        for (const auto& kind : kinds_arg(kinds)) {
            Rng rng = Rng::stream(g.seed, 0);
            MicroNet net;
            Tensor<double> x;
            std::vector<int> labels(batch);
            if (arch == "mlp") {
                net = MicroNet(mlp(2, {8, 8}, 2, kind), Shape{2});
                x = Tensor<double>(Shape{batch, 2});
                for (auto& v : labels) {
                    v = static_cast<int>(rng.below(2));
                }
            } else {
                net = MicroNet({Conv3x3Spec{1, 3}, BatchNormSpec{3}, ActSpec{kind}, DenseSpec{3 * 4 * 4, 3}},
                               Shape{1, 4, 4});
                x = Tensor<double>(Shape{batch, 1, 4, 4});
                for (auto& v : labels) {
                    v = static_cast<int>(rng.below(3));
                }
            }
            for (auto& v : x.data()) {
                v = rng.normal();
            }
            Rng init = Rng::stream(g.seed, 1);
            net.init(init);
            const GradCheckReport r = grad_check(net, x, labels, eps, max_params, g.seed);
            const bool pass = r.max_rel_err < tolerance;
            ok = ok && pass;
            reports.push_back(json{{"kind", activation_name(kind)},
                                   {"max_rel_err", r.max_rel_err},
                                   {"worst_index", r.worst_index},
                                   {"checked", r.checked},
                                   {"skipped_near_kink", r.skipped_near_kink},
                                   {"pass", pass}});
            std::cout << activation_name(kind) << " max_rel_err " << csv::num(r.max_rel_err) << " over " << r.checked
                      << " parameters" << (pass ? "" : "  FAIL") << '\n';
        }
        write_json(g, "gradcheck.json",
                   json{{"arch", arch}, {"eps", eps}, {"tolerance", tolerance}, {"reports", reports}});
        if (!ok) {
            throw CheckFailed("gradcheck: relative error above " + csv::num(tolerance));
        }
    }
};

struct VarianceCmd {
    std::vector<std::string> kinds{"all"};
    std::vector<double> mus{-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<double> sigmas{0.05, 0.1, 0.5, 1.0};
    std::vector<std::string> methods{"delta", "quadrature", "montecarlo"};
    std::size_t samples = 1'000'000;

    void add(CLI::App* sub) {
        sub->add_option("--kind", kinds, "Activation(s), all or compared")->delimiter(',')->check(kKindNames);
        sub->add_option("--mu", mus, "Input means")->delimiter(',');
        sub->add_option("--sigma", sigmas, "Input standard deviations")->delimiter(',')->check(CLI::NonNegativeNumber);
        sub->add_option("--method", methods, "Estimators")
            ->delimiter(',')
            ->check(CLI::IsMember({"delta", "quadrature", "montecarlo", "mc"}));
        sub->add_option("--samples", samples, "Monte-Carlo sample count")->check(CLI::PositiveNumber);
    }

    void run(const Globals& g) const {
        auto os = open_out(g, "moments.csv");
        write_moment_csv_header(os);
        std::uint64_t stream = 0;
        for (const auto& kind : kinds_arg(kinds)) {
            for (double mu : mus) {
                for (double sigma : sigmas) {
                    for (const auto& m : methods) {
                        MomentEstimate e;
                        if (m == "delta") {
                            e.method = MomentMethod::Delta;
                            e.mean = delta_mean(kind, mu, sigma);
                            e.variance = delta_variance(kind, mu, sigma);
                        } else if (m == "quadrature") {
                            e = quadrature_moments(kind, mu, sigma);
                        } else {
                            e = mc_moments(kind, mu, sigma, samples, Rng::stream(g.seed, stream++).next_u64());
                        }
                        write_moment_csv_row(os, kind, mu, sigma, e);
                    }
                }
            }
        }
    }
};

struct SqueezeCmd {
    std::size_t channels = 3;
    std::size_t size = 32;
    std::size_t out_channels = 16;

    void add(CLI::App* sub) {
        sub->add_option("--channels", channels, "Input image channels")->check(CLI::PositiveNumber);
        sub->add_option("--size", size, "Image height and width")->check(CLI::PositiveNumber);
        sub->add_option("--out-channels", out_channels, "Convolution output channels")->check(CLI::PositiveNumber);
    }

    void run(const Globals& g) const {
        const Tensor<double> image = synthetic_image(channels, size, size, g.seed);
        const SqueezeResult r = squeeze_experiment(image, out_channels, g.seed, compared_activations());
        auto os = open_out(g, "squeeze.csv");
        os << "activation,variance\n";
        for (const auto& row : r.rows) {
            os << activation_name(row.activation) << ',' << csv::num(row.variance) << '\n';
        }
        write_json(g, "squeeze.json",
                   json{{"preactivation_variance", r.preactivation_variance}, {"degenerate", r.degenerate}});
    }
};

struct DensityCmd {
    std::vector<std::string> gates{"all"};
    std::size_t points = 60001;
    std::size_t bins = 0;
    std::size_t samples = 1'000'000;

    void add(CLI::App* sub) {
        sub->add_option("--gate", gates, "Gate(s): gompertz, sigmoid, gaussian_cdf, ... or all")->delimiter(',');
        sub->add_option("--points", points, "Grid points per density");
        sub->add_option("--bins", bins, "Also histogram every activation's output on N(0,1) input (0 = off)");
        sub->add_option("--samples", samples, "Input samples for the output histograms")->check(CLI::PositiveNumber);
    }

    void run(const Globals& g) const {
        std::vector<GateKind> kinds;
        if (gates.size() == 1 && gates.front() == "all") {
            kinds.assign(kAllGates.begin(), kAllGates.end());
        } else {
            for (const auto& n : gates) {
                const auto k = parse_gate(n);
                if (!k) {
                    throw UsageError("unknown gate '" + n + "'");
                }
                kinds.push_back(*k);
            }
        }
        json stats = json::array();
        for (GateKind kind : kinds) {
            const DensityProfile p = density_profile(kind, points);
            auto os = open_out(g, "density_" + std::string(gate_name(kind)) + ".csv");
            os << "x,pdf\n";
            for (std::size_t i = 0; i < p.grid.size(); ++i) {
                os << csv::num(p.grid[i]) << ',' << csv::num(p.pdf[i]) << '\n';
            }
            stats.push_back(json{{"gate", gate_name(kind)},
                                 {"mass", p.mass},
                                 {"mean", p.mean},
                                 {"variance", p.variance},
                                 {"skewness", p.skewness},
                                 {"mode", p.mode}});
        }
        write_json(g, "density_stats.json", stats);
        if (bins == 0) {
            return;
        }
        Rng rng(g.seed);
        std::vector<double> z(samples);
        for (auto& v : z) {
            v = rng.normal();
        }
        const Tensor<double> input(Shape{samples}, std::move(z));
        for (const auto& kind : all_activations()) {
            auto os = open_out(g, "output_" + std::string(activation_name(kind)) + ".csv");
            write_histogram_csv(os, output_density(kind, input, bins));
        }
    }
};

struct GapCmd {
    double from = 6.0;
    double to = 15.0;
    double step = 0.01;

    void add(CLI::App* sub) {
        sub->add_option("--from", from, "First x");
        sub->add_option("--to", to, "Last x");
        sub->add_option("--step", step, "Grid spacing")->check(CLI::PositiveNumber);
    }

    void run(const Globals& g) const {
        if (!(to >= from)) {
            throw UsageError("gap: --to must not be below --from");
        }
        auto os = open_out(g, "gap.csv");
        os << "x,gap,normalized\n";
        double lo = 1.0;
        double hi = 0.0;
        const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = from + step * static_cast<double>(i);
            const GateGap gap = sigmoid_gompertz_gap(x);
            lo = std::min(lo, gap.normalized);
            hi = std::max(hi, gap.normalized);
            os << csv::num(x) << ',' << csv::num(gap.gap) << ',' << csv::num(gap.normalized) << '\n';
        }
        write_json(g, "gap.json", json{{"points", n + 1}, {"normalized_min", lo}, {"normalized_max", hi}});
    }
};

struct BenchCmd {
    std::size_t n = 10'000'000;
    std::size_t reps = 20;
    std::string path = "parallel";
    std::vector<std::string> kinds{"all"};

    void add(CLI::App* sub) {
        sub->add_option("--n", n, "Elements per call");
        sub->add_option("--reps", reps, "Timed repetitions");
        sub->add_option("--path", path, "Execution path")->check(CLI::IsMember({"scalar", "vector", "parallel"}));
        sub->add_option("--kind", kinds, "Activation(s), all or compared")->delimiter(',')->check(kKindNames);
    }

    void run(const Globals& g) const {
        const BenchConfig cfg{n, reps, *parse_path(path), g.seed};
        const auto reports = g.precision == "f32" ? bench_kernels<float>(kinds_arg(kinds), cfg)
                                                  : bench_kernels<double>(kinds_arg(kinds), cfg);
        auto os = open_out(g, "bench.csv");
        write_bench_csv(os, reports);
        write_bench_csv(std::cout, reports);
    }
};

struct TrainCmd {
    std::string kind = "golu";
    TrainOpts opts;

    void add(CLI::App* sub) {
        sub->add_option("--kind", kind, "Activation")->check(kKindNames);
        opts.add(sub);
    }

    void run(const Globals& g) const {
        const TrainResult r = opts.run(kind_arg(kind), g.seed);
        auto os = open_out(g, "curve.csv");
        write_curve_csv(os, r.curve);
        save_checkpoint(out_file(g, "model.ckpt").string(), r.net);
        json summary = curve_summary(r);
        summary["kind"] = activation_name(kind_arg(kind));
        write_json(g, "train.json", summary);
        std::cout << kind << ": eval accuracy " << csv::num(r.curve.back().eval_accuracy) << '\n';
    }
};

struct LandscapeCmd {
    std::string checkpoint;
    std::string kind = "golu";
    std::size_t grid = 21;
    double radius = 1.0;
    TrainOpts opts;

    void add(CLI::App* sub) {
        sub->add_option("--checkpoint", checkpoint, "Trained model; trains one from the flags when omitted");
        sub->add_option("--kind", kind, "Activation for the inline training run")->check(kKindNames);
        sub->add_option("--grid", grid, "Cells per axis");
        sub->add_option("--radius", radius, "Coefficient range [-radius, radius]");
        opts.add(sub);
    }

    void run(const Globals& g) const {
        // The held-out set is regenerated from --seed, so a checkpoint must come
        // from a train run with the same --seed and task flags.
        MicroNet net;
        if (checkpoint.empty()) {
            net = opts.run(kind_arg(kind), g.seed).net;
        } else {
            net = load_checkpoint(checkpoint);
        }
        const Dataset test = make_task_data(opts.synthetic(), g.seed).test;
        const Directions dirs = sample_directions(net.param_count(), g.seed);
        const LossSurface s = loss_surface(net, test, dirs, grid, radius);
        auto os = open_out(g, "surface.csv");
        write_surface_csv(os, s);
        const SurfaceStats st = surface_stats(s);
        write_json(g, "surface_stats.json",
                   json{{"base_loss", s.base_loss},
                        {"mean", st.mean},
                        {"variance", st.variance},
                        {"min", st.min},
                        {"max", st.max},
                        {"argmin_alpha", st.argmin_alpha},
                        {"argmin_beta", st.argmin_beta},
                        {"cells", st.cells},
                        {"nan_cells", s.nan_cells}});
    }
};

struct RankCmd {
    std::string scores;
    bool higher_better = false;
    bool lower_better = false;
    double alpha = 0.05;

    void add(CLI::App* sub) {
        sub->add_option("--scores", scores, "CSV: header of method names, one dataset per row")
            ->required()
            ->check(CLI::ExistingFile);
        auto* hb = sub->add_flag("--higher-better", higher_better, "Larger scores are better");
        auto* lb = sub->add_flag("--lower-better", lower_better, "Smaller scores are better");
        hb->excludes(lb);
        sub->add_option("--alpha", alpha, "Significance level (0.05 or 0.10)");
    }

    void run(const Globals& g) const {
        if (!higher_better && !lower_better) {
            throw UsageError("rank: pass --higher-better or --lower-better");
        }
        std::ifstream is(scores);
        const ScoreMatrix m = read_score_csv(is, higher_better);
        const CDResult r = cd_report(m, alpha);
        json methods = json::array();
        for (std::size_t i = 0; i < r.names.size(); ++i) {
            methods.push_back(json{{"name", r.names[i]}, {"mean_rank", r.mean_ranks[i]}});
        }
        json groups = json::array();
        for (const auto& grp : r.groups) {
            json names = json::array();
            for (std::size_t i : grp) {
                names.push_back(r.names[i]);
            }
            groups.push_back(names);
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < r.mean_ranks.size(); ++i) {
            if (r.mean_ranks[i] < r.mean_ranks[best]) {
                best = i;
            }
        }
        const json out{{"datasets", r.n},
                       {"methods", methods},
                       {"best", r.names[best]},
                       {"friedman_chi2", r.friedman_chi2},
                       {"friedman_p", r.friedman_p},
                       {"alpha", r.alpha},
                       {"critical_difference", r.cd},
                       {"groups", groups}};
        write_json(g, "rank.json", out);
        std::cout << out.dump(2) << '\n';
    }
};

struct WeightsCmd {
    std::vector<std::string> checkpoints;
    std::vector<std::string> kinds{"compared"};
    std::size_t bins = 50;
    double mass = 0.98;
    TrainOpts opts;

    void add(CLI::App* sub) {
        sub->add_option("--checkpoint", checkpoints, "Trained models; trains --kind nets when omitted")
            ->check(CLI::ExistingFile);
        sub->add_option("--kind", kinds, "Activations for the inline training runs")
            ->delimiter(',')
            ->check(kKindNames);
        sub->add_option("--bins", bins, "Histogram bins");
        sub->add_option("--mass", mass, "Central mass of the common bulk interval");
        opts.add(sub);
    }

    void run(const Globals& g) const {
        std::vector<std::string> names;
        std::vector<std::vector<double>> sets;
        if (checkpoints.empty()) {
            for (const auto& kind : kinds_arg(kinds)) {
                names.emplace_back(activation_name(kind));
                sets.push_back(non_normalization_weights(opts.run(kind, g.seed).net));
            }
        } else {
            for (const auto& path : checkpoints) {
                names.push_back(fs::path(path).stem().string());
                sets.push_back(non_normalization_weights(load_checkpoint(path)));
            }
        }
        const Interval iv = common_bulk_interval(sets, mass);
        auto os = open_out(g, "weights.csv");
        os << "model,included,bulk_lo,bulk_hi,bulk_count,bulk_variance\n";
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const WeightStats ws = weight_stats(sets[i], bins, iv);
            os << names[i] << ',' << ws.included << ',' << csv::num(iv.lo) << ',' << csv::num(iv.hi) << ','
               << ws.bulk_count << ',' << csv::num(ws.bulk_variance) << '\n';
            auto hs = open_out(g, "weights_" + names[i] + ".csv");
            write_histogram_csv(hs, ws.histogram);
        }
    }
};

void print_usage_error(const CLI::App& app, const CLI::App* sub, const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n" << (sub ? sub->help() : app.help());
}

int run(int argc, char** argv) {
    CLI::App app{"golu-lab: GoLU activation experiments", "golu-lab"};
    app.set_version_flag("--version", GOLU_LAB_VERSION);
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.option_defaults()->always_capture_default();
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values; flags given on the command line win");

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--precision", g.precision, "Tensor precision (f32 is only used by bench)")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();

    GradcheckCmd gradcheck;
    VarianceCmd variance;
    SqueezeCmd squeeze;
    DensityCmd density;
    GapCmd gap;
    BenchCmd bench;
    TrainCmd train;
    LandscapeCmd landscape;
    RankCmd rank;
    WeightsCmd weights;

    std::map<std::string, std::function<void(const Globals&)>> actions;
    auto add = [&](const char* name, const char* help, auto& cmd) {
        CLI::App* sub = app.add_subcommand(name, help);
        cmd.add(sub);
        actions[name] = [&cmd](const Globals& gl) { cmd.run(gl); };
    };
    add("gradcheck", "Finite-difference check of micro-net gradients", gradcheck);
    add("variance", "Output moments by delta method, quadrature and Monte-Carlo", variance);
    add("squeeze", "Conv + batchnorm variance squeeze on a synthetic image", squeeze);
    add("density", "Gate densities and activation output histograms", density);
    add("gap", "Sigmoid minus Gompertz gate gap on the right tail", gap);
    add("bench", "Kernel throughput relative to ReLU", bench);
    add("train", "Train a micro-net on a synthetic task", train);
    add("landscape", "Loss surface along two random directions", landscape);
    add("rank", "Friedman test and Nemenyi critical difference", rank);
    add("weights", "Weight histograms and bulk variance of trained nets", weights);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
        print_usage_error(app, sub, e.what());
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    std::string failure;
    try {
        if (g.precision == "f32" && name != "bench") {
            throw UsageError("--precision f32 is only supported by bench");
        }
        fs::create_directories(g.out);
        actions.at(name)(g);
    } catch (const UsageError& e) {
        print_usage_error(app, sub, e.what());
        return 2;
    } catch (const CheckFailed& e) {
        failure = e.what();
        code = 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest{{"command", name},
                  {"version", GOLU_LAB_VERSION},
                  {"config", JsonConfig::dump_app(&app, true)},
                  {"status", code == 0 ? "ok" : "check failed"},
                  {"wall_time_s", wall}};
    write_json(g, "manifest.json", manifest);
    if (code != 0) {
        std::cerr << "error: " << failure << '\n';
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
