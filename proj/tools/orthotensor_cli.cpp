// orthotensor: synthetic instances, decomposition, rank selection and
// benchmark sweeps from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 1 anything else.

#include "orthotensor/orthotensor.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace orthotensor;
using bench::config_error;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonFlags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string method;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& flags)
{
    cmd->add_option("--config", flags.config, "INI experiment configuration");
    cmd->add_option("--seed", flags.seed, "base seed (falls back to ORTHOTENSOR_SEED)");
    cmd->add_option("--out", flags.out, "output directory or file");
    cmd->add_option("--method", flags.method, "tmhosvd | tpm | all");
    cmd->add_option("--threads", flags.threads, "worker threads");
}

/// Defaults < ORTHOTENSOR_SEED < config file < explicit flags.
bench::ExperimentConfig resolve_config(const CommonFlags& flags)
{
    bench::ExperimentConfig base;
    if (const char* env = std::getenv("ORTHOTENSOR_SEED")) {
        try {
            std::size_t pos = 0;
            base.base_seed = std::stoull(env, &pos);
            if (pos != std::string(env).size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw config_error(fmt::format("ORTHOTENSOR_SEED must be an unsigned integer, got '{}'", env));
        }
    }
    auto cfg = flags.config.empty() ? base : bench::load_config(flags.config, base);
    if (flags.seed)
        cfg.base_seed = *flags.seed;
    if (!flags.method.empty())
        cfg.methods = bench::parse_methods(flags.method);
    if (flags.threads)
        cfg.threads = *flags.threads;
    return cfg;
}

struct ScenarioFlags
{
    std::optional<int> k, d, r, trials;
    std::optional<double> sigma;
    std::string noise, factor_mode;
};

void add_scenario(CLI::App* cmd, ScenarioFlags& s)
{
    cmd->add_option("-k,--order", s.k, "tensor order");
    cmd->add_option("-d,--dim", s.d, "dimension");
    cmd->add_option("-r,--rank", s.r, "number of planted factors");
    cmd->add_option("--sigma", s.sigma, "noise level");
    cmd->add_option("--noise", s.noise, "gaussian | bernoulli | student_t");
    cmd->add_option("--factor-mode", s.factor_mode, "canonical | random_orthonormal");
    cmd->add_option("--trials", s.trials, "number of trials");
}

void apply_scenario(bench::ExperimentConfig& cfg, const ScenarioFlags& s)
{
    if (s.k) cfg.orders = {*s.k};
    if (s.d) cfg.dims = {*s.d};
    if (s.r) cfg.ranks = {*s.r};
    if (s.sigma) cfg.sigmas = {*s.sigma};
    if (s.trials) cfg.trials = *s.trials;
    try {
        if (!s.noise.empty()) cfg.noise = parse_noise_model(s.noise);
        if (!s.factor_mode.empty()) cfg.factor_mode = parse_factor_mode(s.factor_mode);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

int cmd_synth(const CommonFlags& flags, const ScenarioFlags& sflags)
{
    auto cfg = resolve_config(flags);
    apply_scenario(cfg, sflags);
    if (!flags.out.empty())
        cfg.out_dir = flags.out;
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw io_error("cannot create '" + cfg.out_dir.string() + "'");
    for (const auto& sc : bench::scenarios(cfg)) {
        for (int t = 0; t < cfg.trials; ++t) {
            const auto seed = bench::trial_seed(cfg.base_seed, sc, t);
            auto inst = gen_instance(sc.d, sc.k, sc.r, {sc.noise, sc.sigma, 5}, sc.factor_mode, seed, cfg.spectral);
            const auto stem = fmt::format("k{}_d{}_r{}_{}_s{}_t{}", sc.k, sc.d, sc.r, to_string(sc.noise), sc.sigma, t);
            save_tensor(cfg.out_dir / (stem + ".otn"), inst.tensor);
            auto side = instance_sidecar(inst);
            side["factor_mode"] = to_string(sc.factor_mode);
            side["trial"] = t;
            side["base_seed"] = cfg.base_seed;
            save_json(cfg.out_dir / (stem + ".json"), side);
            std::cout << (cfg.out_dir / (stem + ".otn")).string() << '\n';
        }
    }
    return 0;
}

void emit(const nlohmann::json& doc, const std::string& out)
{
    if (out.empty())
        std::cout << doc.dump(2) << '\n';
    else
        save_json(out, doc);
}

int cmd_decompose(const CommonFlags& flags, const std::string& tensor_path, int rank, const std::string& truth_path)
{
    auto cfg = resolve_config(flags);
    if (flags.method.empty())
        cfg.methods = {bench::Method::tmhosvd};
    auto t = load_tensor(tensor_path);
    if (rank < 1)
        throw config_error("--rank must be >= 1");

    std::optional<GroundTruth> truth;
    if (!truth_path.empty())
        truth = truth_from_sidecar(load_json(truth_path));

    nlohmann::json doc = {{"tensor", tensor_path}, {"order", t.order()}, {"dim", t.dim()}, {"rank", rank}};
    nlohmann::json results = nlohmann::json::array();
    for (auto method : cfg.methods) {
        Decomposition dec;
        if (method == bench::Method::tmhosvd) {
            dec = decompose(t, rank, cfg.pursuit);
        } else {
            auto opts = cfg.tpm;
            opts.seed = derive_seed(cfg.base_seed, streams::tpm);
            dec.factors = tpm_decompose(t, rank, opts);
        }
        auto entry = to_json(dec, bench::to_string(method));
        auto residual = residual_norms(t, dec.factors);
        entry["residual_frob"] = residual.frob;
        entry["residual_spectral_lb"] = residual.spectral_lb;
        if (truth) {
            auto match = match_and_score(dec.factors, *truth);
            entry["match"] = {{"permutation", match.permutation},
                              {"per_factor_loss", match.per_factor_loss},
                              {"lambda_losses", match.lambda_losses},
                              {"avg_loss", match.avg_loss},
                              {"max_loss", match.max_loss},
                              {"count_mismatch", match.count_mismatch}};
        }
        results.push_back(entry);
    }
    doc["results"] = results;
    emit(doc, flags.out);
    return 0;
}

int cmd_rank(const CommonFlags& flags, const std::string& tensor_path, std::optional<double> threshold,
             std::optional<double> rank_tol)
{
    auto cfg = resolve_config(flags);
    if (threshold) cfg.rank.objective_threshold = *threshold;
    if (rank_tol) cfg.rank.rank_tol = *rank_tol;
    cfg.rank.pursuit = cfg.pursuit;
    auto t = load_tensor(tensor_path);
    RankSelectionReport report;
    try {
        report = select_rank(t, cfg.rank);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    auto doc = to_json(report);
    doc["tensor"] = tensor_path;
    doc["objective_threshold"] = cfg.rank.objective_threshold;
    doc["rank_tol"] = cfg.rank.rank_tol;
    emit(doc, flags.out);
    return 0;
}

int cmd_bench(const CommonFlags& flags, const ScenarioFlags& sflags, bool no_timing, bool select_rank_flag)
{
    auto cfg = resolve_config(flags);
    apply_scenario(cfg, sflags);
    if (!flags.out.empty())
        cfg.out_dir = flags.out;
    if (no_timing)
        cfg.record_timing = false;
    if (select_rank_flag)
        cfg.select_rank = true;
    cfg.validate();
    bench::RunStats stats;
    auto rows = bench::run_experiment(cfg, &stats);
    save_json(cfg.summary_path(), bench::summarize(rows));
    std::cerr << fmt::format("{} rows ({} computed, {} reused) -> {}\n", rows.size(), stats.computed, stats.reused,
                             cfg.csv_path().string());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-mode HOSVD decomposition of nearly orthogonally decomposable symmetric tensors"};
    app.require_subcommand(1);

    CommonFlags synth_flags, dec_flags, rank_flags, bench_flags;
    ScenarioFlags synth_scenario, bench_scenario;

    auto* synth = app.add_subcommand("synth", "generate planted instances (.otn + .json sidecar)");
    add_common(synth, synth_flags);
    add_scenario(synth, synth_scenario);

    std::string dec_tensor, dec_truth;
    int dec_rank = 0;
    auto* dec = app.add_subcommand("decompose", "decompose a tensor file into factors (JSON)");
    add_common(dec, dec_flags);
    dec->add_option("tensor", dec_tensor, "tensor container (.otn)")->required();
    dec->add_option("-r,--rank", dec_rank, "number of factors")->required();
    dec->add_option("--truth", dec_truth, "instance sidecar JSON to score against");

    std::string rank_tensor;
    std::optional<double> rank_threshold, rank_tol;
    auto* rank = app.add_subcommand("rank", "estimate the number of factors (JSON report)");
    add_common(rank, rank_flags);
    rank->add_option("tensor", rank_tensor, "tensor container (.otn)")->required();
    rank->add_option("--objective-threshold", rank_threshold, "minimum pursuit objective (default 0.9)");
    rank->add_option("--rank-tol", rank_tol, "relative rank tolerance (default 1e-6)");

    bool no_timing = false, bench_select_rank = false;
    auto* bench_cmd = app.add_subcommand("bench", "run a seeded sweep (CSV + summary JSON)");
    add_common(bench_cmd, bench_flags);
    add_scenario(bench_cmd, bench_scenario);
    bench_cmd->add_flag("--no-timing", no_timing, "write runtime_ms = 0 for byte-reproducible CSV");
    bench_cmd->add_flag("--select-rank", bench_select_rank, "also record the estimated rank for tmhosvd rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*synth)
            return cmd_synth(synth_flags, synth_scenario);
        if (*dec)
            return cmd_decompose(dec_flags, dec_tensor, dec_rank, dec_truth);
        if (*rank)
            return cmd_rank(rank_flags, rank_tensor, rank_threshold, rank_tol);
        if (*bench_cmd)
            return cmd_bench(bench_flags, bench_scenario, no_timing, bench_select_rank);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const format_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
