// Command-line frontend: simulate attack data, fit adversary models,
// predict attack distributions, plan defender strategies, evaluate models
// on train/test splits, and evaluate sample-complexity bounds.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssg/complexity.hpp"
#include "ssg/io.hpp"
#include "ssg/npl.hpp"
#include "ssg/planner.hpp"
#include "ssg/rng.hpp"
#include "ssg/simulate.hpp"
#include "ssg/suqr.hpp"

namespace {

using namespace ssg;

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
    return out;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::fputs(content.c_str(), stdout);
    else
        io::atomic_write(out_path, content);
}

sim::SamplerOptions sampler_options(const std::string& name, double grid_res, double conc) {
    sim::SamplerOptions opts;
    if (name == "uniform")
        opts.kind = sim::SamplerKind::UniformRejection;
    else if (name == "dirichlet")
        opts.kind = sim::SamplerKind::DirichletScaled;
    else if (name == "grid")
        opts.kind = sim::SamplerKind::AnchoredGrid;
    else
        throw std::invalid_argument("--sampler must be uniform, dirichlet or grid");
    opts.grid_resolution = grid_res;
    opts.concentration = conc;
    return opts;
}

sim::GroundTruth make_truth(const std::string& kind, const SecurityGame& game, double w1,
                            double w2, double w3, const std::string& c_csv) {
    if (kind == "ssuqr") return sim::GroundTruth::standard(game, w1, w2, w3);
    if (kind == "quad") return sim::GroundTruth::quadratic(game, w1, w2, w3);
    if (kind == "gsuqr") {
        std::vector<double> c =
            c_csv.empty() ? std::vector<double>(game.num_targets - 1, 0.0) : parse_doubles(c_csv);
        if (static_cast<int>(c.size()) != game.num_targets - 1)
            throw std::invalid_argument("--c must list T-1 intercepts");
        return sim::GroundTruth::generalized(w1, c);
    }
    throw std::invalid_argument("--truth must be ssuqr, gsuqr or quad");
}

sim::ModelSpec model_spec(const std::string& name, double big_m, double khat, bool clamp) {
    sim::ModelSpec spec;
    if (name == "gsuqr")
        spec.kind = sim::ModelSpec::Kind::Gsuqr;
    else if (name == "ssuqr")
        spec.kind = sim::ModelSpec::Kind::Ssuqr;
    else if (name == "npl")
        spec.kind = sim::ModelSpec::Kind::Npl;
    else
        throw std::invalid_argument("--models entries must be gsuqr, ssuqr or npl");
    spec.big_m = big_m;
    spec.khat = khat;
    spec.clamp = clamp;
    return spec;
}

struct FitFlags {
    std::string model = "gsuqr";
    std::string data_path;
    std::string game_path;
    std::string out_path;
    double big_m = 20.0;
    double khat = 5.0;
    bool no_clamp = false;
    bool cv_khat = false;
    std::uint64_t seed = 0;
};

int run_fit(const FitFlags& f) {
    AttackDataset data = io::read_dataset_csv(f.data_path);
    io::LearnedModel model;
    if (f.model == "gsuqr") {
        model.kind = io::LearnedModel::Kind::Gsuqr;
        model.gsuqr = gsuqr_fit(data, f.big_m);
    } else if (f.model == "ssuqr") {
        if (f.game_path.empty())
            throw std::invalid_argument("--game is required to fit an ssuqr model");
        SecurityGame game = io::read_game(f.game_path);
        model.kind = io::LearnedModel::Kind::Ssuqr;
        model.ssuqr = ssuqr_fit(data, game);
    } else if (f.model == "npl") {
        double khat = f.khat;
        if (f.cv_khat)
            khat = cross_validate_khat(data, {0.5, 1.0, 2.0, 5.0, 10.0}, 4, f.seed, f.big_m);
        model.kind = io::LearnedModel::Kind::Npl;
        model.npl = npl_fit(data, khat, f.big_m, !f.no_clamp);
    } else {
        throw std::invalid_argument("--model must be gsuqr, ssuqr or npl");
    }
    emit(io::model_to_json(model), f.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversary response learning and defender planning for security games"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Draw strategies and simulated attacks");
    std::string sim_game, sim_truth = "ssuqr", sim_c, sim_sampler = "uniform", sim_out;
    double sim_w1 = -9.85, sim_w2 = 0.37, sim_w3 = 0.15, sim_res = 0.1, sim_conc = 1.0;
    int sim_strats = 20, sim_attacks = 50;
    std::uint64_t sim_seed = 0;
    sim_cmd->add_option("--game", sim_game, "game.json path")->required();
    sim_cmd->add_option("--truth", sim_truth, "ssuqr | gsuqr | quad");
    sim_cmd->add_option("--w1", sim_w1, "truth coverage weight");
    sim_cmd->add_option("--w2", sim_w2, "truth reward weight");
    sim_cmd->add_option("--w3", sim_w3, "truth penalty weight");
    sim_cmd->add_option("--c", sim_c, "gsuqr truth intercepts, comma separated");
    sim_cmd->add_option("--strategies", sim_strats, "number of strategies");
    sim_cmd->add_option("--attacks", sim_attacks, "attacks per strategy");
    sim_cmd->add_option("--sampler", sim_sampler, "uniform | dirichlet | grid");
    sim_cmd->add_option("--grid-res", sim_res, "grid sampler resolution");
    sim_cmd->add_option("--concentration", sim_conc, "dirichlet sampler concentration");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed")->required();
    sim_cmd->add_option("--out", sim_out, "output dataset.csv")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit an adversary model to a dataset");
    FitFlags fit_flags;
    fit_cmd->add_option("--model", fit_flags.model, "gsuqr | ssuqr | npl")->required();
    fit_cmd->add_option("--data", fit_flags.data_path, "dataset.csv path")->required();
    fit_cmd->add_option("--game", fit_flags.game_path, "game.json path (ssuqr)");
    fit_cmd->add_option("--big-m", fit_flags.big_m, "exponent range bound M");
    fit_cmd->add_option("--khat", fit_flags.khat, "NPL Lipschitz budget");
    fit_cmd->add_flag("--no-clamp", fit_flags.no_clamp, "do not clamp NPL extrapolation");
    fit_cmd->add_flag("--cv-khat", fit_flags.cv_khat, "pick khat by cross-validation");
    fit_cmd->add_option("--seed", fit_flags.seed, "seed for --cv-khat folds");
    fit_cmd->add_option("--out", fit_flags.out_path, "output model.json")->required();

    // predict
    auto* pred_cmd = app.add_subcommand("predict", "Attack distribution at a strategy");
    std::string pred_model, pred_game, pred_x, pred_out;
    pred_cmd->add_option("--model", pred_model, "model.json path")->required();
    pred_cmd->add_option("--game", pred_game, "game.json path (ssuqr models)");
    pred_cmd->add_option("--x", pred_x, "strategy, comma separated")->required();
    pred_cmd->add_option("--out", pred_out, "output path (stdout when absent)");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Defender strategy against a learned model");
    std::string plan_game, plan_model, plan_out;
    int plan_starts = 32, plan_jobs = 1;
    std::uint64_t plan_seed = 0;
    plan_cmd->add_option("--game", plan_game, "game.json path")->required();
    plan_cmd->add_option("--model", plan_model, "model.json path")->required();
    plan_cmd->add_option("--starts", plan_starts, "multi-start count");
    plan_cmd->add_option("--seed", plan_seed, "RNG seed");
    plan_cmd->add_option("--jobs", plan_jobs, "parallel starts");
    plan_cmd->add_option("--out", plan_out, "output path (stdout when absent)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Train/test evaluation of model specs");
    std::string ev_game, ev_data, ev_truth, ev_c, ev_sampler = "uniform", ev_models = "gsuqr";
    std::string ev_deltas = "0.01,0.05,0.1,0.25,0.5", ev_mode = "fine", ev_sizes, ev_out, ev_csv;
    std::string ev_reference = "auto";
    double ev_w1 = -9.85, ev_w2 = 0.37, ev_w3 = 0.15, ev_res = 0.1, ev_conc = 1.0;
    double ev_train = 0.7, ev_big_m = 20.0, ev_khat = 5.0, ev_threshold = 0.5;
    int ev_splits = 100, ev_strats = 20, ev_attacks = 50, ev_jobs = 1, ev_seeds_per_size = 20;
    std::uint64_t ev_seed = 0;
    eval_cmd->add_option("--game", ev_game, "game.json path");
    eval_cmd->add_option("--data", ev_data, "fixed dataset.csv (mutually exclusive with --truth)");
    eval_cmd->add_option("--truth", ev_truth, "simulated source: ssuqr | gsuqr | quad");
    eval_cmd->add_option("--w1", ev_w1, "truth coverage weight");
    eval_cmd->add_option("--w2", ev_w2, "truth reward weight");
    eval_cmd->add_option("--w3", ev_w3, "truth penalty weight");
    eval_cmd->add_option("--c", ev_c, "gsuqr truth intercepts");
    eval_cmd->add_option("--sampler", ev_sampler, "uniform | dirichlet | grid");
    eval_cmd->add_option("--grid-res", ev_res, "grid sampler resolution");
    eval_cmd->add_option("--concentration", ev_conc, "dirichlet concentration");
    eval_cmd->add_option("--strategies", ev_strats, "strategies per simulated dataset");
    eval_cmd->add_option("--attacks", ev_attacks, "attacks per strategy");
    eval_cmd->add_option("--models", ev_models, "comma list of gsuqr,ssuqr,npl");
    eval_cmd->add_option("--big-m", ev_big_m, "exponent range bound M");
    eval_cmd->add_option("--khat", ev_khat, "NPL Lipschitz budget");
    eval_cmd->add_option("--splits", ev_splits, "train/test splits");
    eval_cmd->add_option("--deltas", ev_deltas, "comma list of deltas");
    eval_cmd->add_option("--train-frac", ev_train, "train fraction of unique strategies");
    eval_cmd->add_option("--mode", ev_mode, "fine | coarse");
    eval_cmd->add_option("--threshold", ev_threshold, "coarse-grained threshold");
    eval_cmd->add_option("--reference", ev_reference, "auto | truth | empirical");
    eval_cmd->add_option("--sizes", ev_sizes, "sample sizes for the decay sweep");
    eval_cmd->add_option("--seeds-per-size", ev_seeds_per_size, "rounds per sweep size");
    eval_cmd->add_option("--jobs", ev_jobs, "parallel splits");
    eval_cmd->add_option("--seed", ev_seed, "RNG seed")->required();
    eval_cmd->add_option("--out", ev_out, "output report.json")->required();
    eval_cmd->add_option("--csv", ev_csv, "plot-ready CSV path");

    // bounds
    auto* b_cmd = app.add_subcommand("bounds", "Sample-complexity bound calculators");
    std::string b_model = "gsuqr", b_cover = "exact", b_out;
    complexity::ComplexityQuery query;
    b_cmd->add_option("--model", b_model, "gsuqr | ssuqr | npl | gsuqr-weak")->required();
    b_cmd->add_option("--alpha", query.alpha, "risk gap")->required();
    b_cmd->add_option("--delta", query.delta, "failure probability")->required();
    b_cmd->add_option("--targets", query.targets, "number of targets")->required();
    b_cmd->add_option("--resources", query.resources, "defender resources");
    b_cmd->add_option("--big-m", query.big_m, "exponent range bound M");
    b_cmd->add_option("--khat", query.khat, "NPL Lipschitz budget");
    b_cmd->add_option("--rmax", query.r_max, "reward bound (ssuqr)");
    b_cmd->add_option("--pmin-abs", query.p_min_abs, "penalty magnitude bound (ssuqr)");
    b_cmd->add_option("--cover", b_cover, "exact | bernstein (npl)");
    b_cmd->add_option("--out", b_out, "output path (stdout when absent)");

    try {
        app.parse(argc, argv);

        if (sim_cmd->parsed()) {
            SecurityGame game = io::read_game(sim_game);
            sim::GroundTruth truth = make_truth(sim_truth, game, sim_w1, sim_w2, sim_w3, sim_c);
            auto strategies =
                sim::sample_strategies(game.num_targets, game.num_resources, sim_strats,
                                       sampler_options(sim_sampler, sim_res, sim_conc), sim_seed);
            auto data = sim::simulate_attacks(truth, strategies, sim_attacks,
                                              splitmix64(sim_seed + 0x5151));
            emit(io::dataset_to_csv(data), sim_out);
            return 0;
        }
        if (fit_cmd->parsed()) return run_fit(fit_flags);
        if (pred_cmd->parsed()) {
            io::LearnedModel model = io::read_model(pred_model);
            SecurityGame game;
            const SecurityGame* game_ptr = nullptr;
            if (!pred_game.empty()) {
                game = io::read_game(pred_game);
                game_ptr = &game;
            }
            MixedStrategy x(parse_doubles(pred_x));
            AttackDistribution q = model.predictor(game_ptr)(x);
            std::string out = "{\"q\":[";
            for (int i = 0; i < q.num_targets(); ++i) {
                if (i) out += ",";
                out += io::format_double(q[i]);
            }
            out += "]}\n";
            emit(out, pred_out);
            return 0;
        }
        if (plan_cmd->parsed()) {
            SecurityGame game = io::read_game(plan_game);
            io::LearnedModel model = io::read_model(plan_model);
            auto res =
                plan_strategy(game, model.predictor(&game), plan_starts, plan_seed, plan_jobs);
            emit(io::plan_to_json(res.x.coverage, res.utility), plan_out);
            return 0;
        }
        if (eval_cmd->parsed()) {
            if (ev_data.empty() == ev_truth.empty())
                throw std::invalid_argument("eval needs exactly one of --data or --truth");
            SecurityGame game;
            const SecurityGame* game_ptr = nullptr;
            if (!ev_game.empty()) {
                game = io::read_game(ev_game);
                game_ptr = &game;
            }

            std::vector<sim::ModelSpec> specs;
            {
                std::size_t pos = 0;
                while (pos < ev_models.size()) {
                    std::size_t next = ev_models.find(',', pos);
                    if (next == std::string::npos) next = ev_models.size();
                    specs.push_back(
                        model_spec(ev_models.substr(pos, next - pos), ev_big_m, ev_khat, true));
                    pos = next + 1;
                }
            }

            sim::EvalOptions opts;
            opts.num_splits = ev_splits;
            opts.deltas = parse_doubles(ev_deltas);
            opts.train_fraction = ev_train;
            opts.mode = ev_mode == "coarse" ? sim::EvalOptions::Mode::Coarse
                                            : sim::EvalOptions::Mode::Fine;
            opts.coarse_threshold = ev_threshold;
            opts.jobs = ev_jobs;

            sim::DatasetSource source;
            QFn truth_fn;
            bool have_truth = false;
            int fixed_size = 0;
            sim::GroundTruth truth;
            sim::SamplerOptions sampler = sampler_options(ev_sampler, ev_res, ev_conc);
            if (!ev_data.empty()) {
                AttackDataset data = io::read_dataset_csv(ev_data);
                fixed_size = static_cast<int>(data.size());
                source = sim::fixed_dataset(std::move(data));
            } else {
                if (!game_ptr) throw std::invalid_argument("--game is required with --truth");
                truth = make_truth(ev_truth, game, ev_w1, ev_w2, ev_w3, ev_c);
                truth_fn = truth.as_qfn();
                have_truth = true;
                fixed_size = ev_strats * ev_attacks;
                SecurityGame g_copy = game;
                sim::GroundTruth t_copy = truth;
                int strats = ev_strats, attacks = ev_attacks;
                sim::SamplerOptions s_copy = sampler;
                source = [g_copy, t_copy, strats, attacks, s_copy](std::uint64_t seed) {
                    auto xs = sim::sample_strategies(g_copy.num_targets, g_copy.num_resources,
                                                     strats, s_copy, seed);
                    return sim::simulate_attacks(t_copy, xs, attacks, splitmix64(seed + 0xA));
                };
            }
            const QFn* reference = nullptr;
            if (ev_reference == "truth" || (ev_reference == "auto" && have_truth)) {
                if (!have_truth)
                    throw std::invalid_argument("--reference truth requires --truth");
                reference = &truth_fn;
            } else if (ev_reference != "empirical" && ev_reference != "auto") {
                throw std::invalid_argument("--reference must be auto, truth or empirical");
            }

            auto report = sim::evaluate(specs, game_ptr, source, reference, opts, ev_seed);

            sim::DecayFit decay;
            const sim::DecayFit* decay_ptr = nullptr;
            if (!ev_sizes.empty()) {
                if (!have_truth)
                    throw std::invalid_argument("--sizes requires the simulated --truth source");
                decay = sim::evaluate_decay(specs.front(), game_ptr, truth, sampler, ev_strats,
                                            parse_ints(ev_sizes), ev_seeds_per_size, ev_train,
                                            splitmix64(ev_seed + 0xD), opts);
                decay_ptr = &decay;
            }
            emit(io::report_to_json(report, decay_ptr), ev_out);
            if (!ev_csv.empty())
                io::atomic_write(ev_csv, io::report_to_csv(report, fixed_size, decay_ptr));
            return 0;
        }
        if (b_cmd->parsed()) {
            query.cover_mode = b_cover == "bernstein" ? complexity::CoverMode::Bernstein
                                                      : complexity::CoverMode::ExactVolume;
            complexity::ComplexityResult res;
            if (b_model == "gsuqr")
                res = complexity::samples_gsuqr(query);
            else if (b_model == "ssuqr")
                res = complexity::samples_ssuqr(query);
            else if (b_model == "npl")
                res = complexity::samples_npl(query);
            else if (b_model == "gsuqr-weak")
                res = complexity::samples_gsuqr_weak(query);
            else
                throw std::invalid_argument("--model must be gsuqr, ssuqr, npl or gsuqr-weak");
            emit(io::bounds_to_json(b_model, res.samples, res.ln_samples, res.ln_capacity), b_out);
            return 0;
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const io::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
