#pragma once

// Seeded experiment sweeps: scenario grid x trials x methods -> CSV rows,
// plus per-cell summaries.
//
// CSV columns (header included, '.' decimal, shortest round-trip doubles):
//   method,k,d,r,noise_model,sigma,trial,seed,avg_loss,max_loss,
//   avg_lambda_loss,residual_frob,rank_hat,runtime_ms,converged_count

#include "orthotensor/io.hpp"
#include "orthotensor/metrics.hpp"
#include "orthotensor/rank_select.hpp"
#include "orthotensor/synth.hpp"
#include "orthotensor/tmhosvd.hpp"
#include "orthotensor/tpm.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace orthotensor::bench {

/// Invalid experiment configuration (maps to CLI exit code 2).
class config_error : public std::runtime_error
{
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

enum class Method { tmhosvd, tpm };

inline std::string to_string(Method m) { return m == Method::tmhosvd ? "tmhosvd" : "tpm"; }

inline Method parse_method(std::string_view s)
{
    if (s == "tmhosvd") return Method::tmhosvd;
    if (s == "tpm") return Method::tpm;
    throw config_error("unknown method '" + std::string(s) + "'");
}

inline std::vector<Method> parse_methods(std::string_view s)
{
    if (s == "all")
        return {Method::tmhosvd, Method::tpm};
    std::vector<Method> out;
    std::stringstream ss{std::string(s)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty())
            continue;
        if (item == "all")
            return {Method::tmhosvd, Method::tpm};
        auto m = parse_method(item);
        if (std::find(out.begin(), out.end(), m) == out.end())
            out.push_back(m);
    }
    return out;
}

struct ExperimentConfig
{
    std::vector<int> orders{3};
    std::vector<int> dims{25};
    std::vector<int> ranks{2};
    NoiseModel noise = NoiseModel::gaussian;
    std::vector<double> sigmas{0.0};
    FactorMode factor_mode = FactorMode::canonical;
    int trials = 50;
    std::uint64_t base_seed = 0;
    std::vector<Method> methods{Method::tmhosvd};
    PursuitOptions pursuit{};
    TpmOptions tpm{};
    bool select_rank = false;
    RankSelectOptions rank{};
    SpectralNormOptions spectral{10, 100, 0};
    bool record_timing = true;
    int threads = 1;
    std::filesystem::path out_dir = ".";
    std::string csv_name = "results.csv";
    std::string summary_name = "summary.json";

    std::filesystem::path csv_path() const { return out_dir / csv_name; }
    std::filesystem::path summary_path() const { return out_dir / summary_name; }

    void validate() const
    {
        auto nonempty = [](const auto& v, const char* what) {
            if (v.empty())
                throw config_error(std::string(what) + " list must be non-empty");
        };
        nonempty(orders, "order");
        nonempty(dims, "dim");
        nonempty(ranks, "rank");
        nonempty(sigmas, "sigma");
        nonempty(methods, "methods");
        for (int k : orders)
            if (k < 3 || k > kMaxOrder)
                throw config_error("order must be in [3, 16]");
        for (int d : dims)
            if (d < 1)
                throw config_error("dim must be >= 1");
        for (int r : ranks)
            for (int d : dims)
                if (r < 1 || r > d)
                    throw config_error("rank must satisfy 1 <= r <= d");
        for (double s : sigmas)
            if (!(s >= 0.0) || !std::isfinite(s))
                throw config_error("sigma values must be finite and >= 0");
        if (trials < 1)
            throw config_error("trials must be >= 1");
        if (threads < 1)
            throw config_error("threads must be >= 1");
        if (tpm.restarts < 1 || tpm.iters < 1)
            throw config_error("tpm restarts and iters must be >= 1");
        if (!(pursuit.tol > 0.0) || pursuit.max_iters < 1)
            throw config_error("tmhosvd tol must be > 0 and max_iters >= 1");
        if (spectral.restarts < 1 || spectral.iters < 1)
            throw config_error("spectral restarts and iters must be >= 1");
        if (!(rank.objective_threshold > 0.0 && rank.objective_threshold < 1.0)
            || !(rank.rank_tol > 0.0 && rank.rank_tol < 1.0))
            throw config_error("rank thresholds must lie in (0, 1)");
    }
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty())
            continue;
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        T value{};
        if (!(is >> value) || !is.eof())
            throw config_error("invalid value '" + item + "' for key '" + key + "'");
        out.push_back(value);
    }
    return out;
}

template <class T>
T parse_scalar(const std::string& text, const std::string& key)
{
    auto values = parse_list<T>(text, key);
    if (values.size() != 1)
        throw config_error("key '" + key + "' expects a single value");
    return values.front();
}

inline bool parse_bool(const std::string& text, const std::string& key)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw config_error("invalid boolean '" + text + "' for key '" + key + "'");
}

inline SvdMethod parse_svd(const std::string& text)
{
    if (text == "automatic" || text == "auto") return SvdMethod::automatic;
    if (text == "gram") return SvdMethod::gram;
    if (text == "direct") return SvdMethod::direct;
    throw config_error("invalid svd method '" + text + "'");
}

} // namespace detail

/// Applies `key = value` to the config; `section.key` names as in the INI file.
inline void apply_setting(ExperimentConfig& cfg, const std::string& name, const std::string& value)
{
    using namespace detail;
    try {
        if (name == "experiment.order") cfg.orders = parse_list<int>(value, name);
        else if (name == "experiment.dim") cfg.dims = parse_list<int>(value, name);
        else if (name == "experiment.rank") cfg.ranks = parse_list<int>(value, name);
        else if (name == "experiment.noise") cfg.noise = parse_noise_model(value);
        else if (name == "experiment.sigma") cfg.sigmas = parse_list<double>(value, name);
        else if (name == "experiment.factor_mode") cfg.factor_mode = parse_factor_mode(value);
        else if (name == "experiment.trials") cfg.trials = parse_scalar<int>(value, name);
        else if (name == "experiment.base_seed") cfg.base_seed = parse_scalar<std::uint64_t>(value, name);
        else if (name == "experiment.methods") cfg.methods = parse_methods(value);
        else if (name == "experiment.select_rank") cfg.select_rank = parse_bool(value, name);
        else if (name == "experiment.record_timing") cfg.record_timing = parse_bool(value, name);
        else if (name == "experiment.threads") cfg.threads = parse_scalar<int>(value, name);
        else if (name == "tmhosvd.tol") cfg.pursuit.tol = parse_scalar<double>(value, name);
        else if (name == "tmhosvd.max_iters") cfg.pursuit.max_iters = parse_scalar<int>(value, name);
        else if (name == "tmhosvd.svd") cfg.pursuit.svd_method = parse_svd(value);
        else if (name == "tmhosvd.rank_tol") cfg.pursuit.rank_tol = parse_scalar<double>(value, name);
        else if (name == "tpm.restarts") cfg.tpm.restarts = parse_scalar<int>(value, name);
        else if (name == "tpm.iters") cfg.tpm.iters = parse_scalar<int>(value, name);
        else if (name == "tpm.tol") cfg.tpm.tol = parse_scalar<double>(value, name);
        else if (name == "rank.objective_threshold") cfg.rank.objective_threshold = parse_scalar<double>(value, name);
        else if (name == "rank.rank_tol") cfg.rank.rank_tol = parse_scalar<double>(value, name);
        else if (name == "spectral.restarts") cfg.spectral.restarts = parse_scalar<int>(value, name);
        else if (name == "spectral.iters") cfg.spectral.iters = parse_scalar<int>(value, name);
        else if (name == "output.dir") cfg.out_dir = value;
        else if (name == "output.csv") cfg.csv_name = value;
        else if (name == "output.summary") cfg.summary_name = value;
        else throw config_error("unknown configuration key '" + name + "'");
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

/// Parses INI text on top of `base` (defaults, environment-derived values).
inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {})
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg = std::move(base);
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw config_error("config: key '" + section + "' must appear inside a [section]");
        for (const auto& [key, value] : body)
            apply_setting(cfg, section + "." + key, value.data());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {})
{
    std::ifstream is(path);
    if (!is)
        throw config_error("cannot open config '" + path.string() + "'");
    return parse_config(is, std::move(base));
}

struct Scenario
{
    int k = 3;
    int d = 25;
    int r = 2;
    NoiseModel noise = NoiseModel::gaussian;
    double sigma = 0.0;
    FactorMode factor_mode = FactorMode::canonical;

    std::string id() const
    {
        return fmt::format("k={}|d={}|r={}|noise={}|sigma={}|factors={}", k, d, r, orthotensor::to_string(noise),
                           sigma, orthotensor::to_string(factor_mode));
    }
};

/// Grid order: order, dim, rank, sigma (last varies fastest).
inline std::vector<Scenario> scenarios(const ExperimentConfig& cfg)
{
    std::vector<Scenario> out;
    for (int k : cfg.orders)
        for (int d : cfg.dims)
            for (int r : cfg.ranks)
                for (double s : cfg.sigmas)
                    out.push_back({k, d, r, cfg.noise, s, cfg.factor_mode});
    return out;
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Pure function of (base_seed, scenario, trial).
inline std::uint64_t trial_seed(std::uint64_t base_seed, const Scenario& s, int trial)
{
    return derive_seed(derive_seed(base_seed, fnv1a(s.id())), static_cast<std::uint64_t>(trial));
}

struct ResultRow
{
    std::string method;
    int k = 0;
    int d = 0;
    int r = 0;
    std::string noise_model;
    double sigma = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double avg_loss = 0.0;
    double max_loss = 0.0;
    double avg_lambda_loss = 0.0;
    double residual_frob = 0.0;
    std::optional<int> rank_hat;
    double runtime_ms = 0.0;
    int converged_count = 0;

    using Key = std::tuple<std::string, int, int, int, std::string, double, int>;
    Key key() const { return {method, k, d, r, noise_model, sigma, trial}; }
};

inline constexpr const char* kCsvHeader = "method,k,d,r,noise_model,sigma,trial,seed,avg_loss,max_loss,"
                                          "avg_lambda_loss,residual_frob,rank_hat,runtime_ms,converged_count";

inline std::string format_row(const ResultRow& row)
{
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f},{}", row.method, row.k, row.d, row.r,
                       row.noise_model, row.sigma, row.trial, row.seed, row.avg_loss, row.max_loss,
                       row.avg_lambda_loss, row.residual_frob, row.rank_hat ? std::to_string(*row.rank_hat) : "",
                       row.runtime_ms, row.converged_count);
}

inline ResultRow parse_row(const std::string& line)
{
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (f.size() != 15)
        throw format_error("csv: expected 15 fields, got " + std::to_string(f.size()) + " in '" + line + "'");
    auto to_double = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size())
            throw format_error("csv: bad number '" + s + "'");
        return v;
    };
    auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            throw format_error("csv: bad integer '" + s + "'");
        }
        if (pos != s.size())
            throw format_error("csv: bad integer '" + s + "'");
        return v;
    };
    ResultRow row;
    row.method = f[0];
    row.k = to_int(f[1]);
    row.d = to_int(f[2]);
    row.r = to_int(f[3]);
    row.noise_model = f[4];
    row.sigma = to_double(f[5]);
    row.trial = to_int(f[6]);
    try {
        row.seed = std::stoull(f[7]);
    } catch (const std::exception&) {
        throw format_error("csv: bad seed '" + f[7] + "'");
    }
    row.avg_loss = to_double(f[8]);
    row.max_loss = to_double(f[9]);
    row.avg_lambda_loss = to_double(f[10]);
    row.residual_frob = to_double(f[11]);
    if (!f[12].empty())
        row.rank_hat = to_int(f[12]);
    row.runtime_ms = to_double(f[13]);
    row.converged_count = to_int(f[14]);
    return row;
}

/// Reads a results CSV. With `tolerate_torn_tail` a malformed final line (an
/// interrupted append) is skipped instead of rejected.
inline std::vector<ResultRow> read_csv(const std::filesystem::path& path, bool tolerate_torn_tail = false)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw format_error("csv: '" + path.string() + "' does not start with the expected header");
    std::vector<std::string> lines;
    while (std::getline(is, line))
        if (!line.empty())
            lines.push_back(line);
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            rows.push_back(parse_row(lines[i]));
        } catch (const format_error&) {
            if (!(tolerate_torn_tail && i + 1 == lines.size()))
                throw;
        }
    }
    return rows;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os)
            throw io_error("cannot open '" + tmp.string() + "' for writing");
        os << kCsvHeader << '\n';
        for (const auto& row : rows)
            os << format_row(row) << '\n';
        if (!os)
            throw io_error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw io_error("cannot replace '" + path.string() + "': " + ec.message());
}

/// Runs one method on one instance and scores it against the planted truth.
inline ResultRow run_method(const Instance& inst, const Scenario& sc, Method method, const ExperimentConfig& cfg,
                            int trial)
{
    ResultRow row;
    row.method = to_string(method);
    row.k = sc.k;
    row.d = sc.d;
    row.r = sc.r;
    row.noise_model = orthotensor::to_string(sc.noise);
    row.sigma = sc.sigma;
    row.trial = trial;
    row.seed = inst.seed;

    try {
        std::vector<FactorEstimate> estimates;
        const auto start = std::chrono::steady_clock::now();
        if (method == Method::tmhosvd) {
            estimates = decompose(inst.tensor, sc.r, cfg.pursuit).factors;
        } else {
            TpmOptions opts = cfg.tpm;
            opts.seed = derive_seed(inst.seed, streams::tpm);
            estimates = tpm_decompose(inst.tensor, sc.r, opts);
        }
        const auto stop = std::chrono::steady_clock::now();
        if (cfg.record_timing)
            row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();

        const auto match = match_and_score(estimates, inst.truth);
        row.avg_loss = match.avg_loss;
        row.max_loss = match.max_loss;
        row.avg_lambda_loss = match.avg_lambda_loss;
        row.residual_frob = residual_tensor(inst.tensor, estimates).frobenius_norm();
        row.converged_count = static_cast<int>(
            std::count_if(estimates.begin(), estimates.end(), [](const FactorEstimate& f) { return f.converged; }));
        if (cfg.select_rank && method == Method::tmhosvd)
            row.rank_hat = select_rank(inst.tensor, cfg.rank).r_hat;
    } catch (const std::exception&) {
        // Worst possible vector loss; the trial is kept so the sweep completes.
        row.avg_loss = row.max_loss = std::sqrt(2.0);
        row.avg_lambda_loss = std::nan("");
        row.residual_frob = std::nan("");
        row.converged_count = 0;
        row.rank_hat.reset();
    }
    return row;
}

struct RunStats
{
    std::size_t computed = 0;
    std::size_t reused = 0;
};

/// Executes the sweep. Rows already present in the CSV (same method,
/// scenario and trial) are reused; new rows are appended as they complete and
/// the file is finally rewritten in canonical order.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, RunStats* stats = nullptr)
{
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec)
        throw io_error("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());

    const auto grid = scenarios(cfg);
    std::map<ResultRow::Key, ResultRow> done;
    const auto csv = cfg.csv_path();
    if (std::filesystem::exists(csv)) {
        for (auto& row : read_csv(csv, true))
            done.emplace(row.key(), std::move(row));
    }

    struct Task
    {
        std::size_t scenario;
        int trial;
        std::vector<Method> missing;
    };
    std::vector<Task> tasks;
    std::size_t reused = 0;
    for (std::size_t s = 0; s < grid.size(); ++s)
        for (int t = 0; t < cfg.trials; ++t) {
            Task task{s, t, {}};
            for (Method m : cfg.methods) {
                ResultRow probe;
                probe.method = to_string(m);
                probe.k = grid[s].k;
                probe.d = grid[s].d;
                probe.r = grid[s].r;
                probe.noise_model = orthotensor::to_string(grid[s].noise);
                probe.sigma = grid[s].sigma;
                probe.trial = t;
                if (done.count(probe.key()))
                    ++reused;
                else
                    task.missing.push_back(m);
            }
            if (!task.missing.empty())
                tasks.push_back(std::move(task));
        }

    std::ofstream append;
    if (!tasks.empty()) {
        const bool fresh = !std::filesystem::exists(csv);
        if (fresh) {
            write_csv(csv, {});
        } else {
            // Rewrite canonical header + reused rows before appending.
            std::vector<ResultRow> existing;
            for (const auto& [k, row] : done)
                existing.push_back(row);
            write_csv(csv, existing);
        }
        append.open(csv, std::ios::app);
        if (!append)
            throw io_error("cannot open '" + csv.string() + "' for appending");
    }

    std::mutex writer;
    std::vector<std::vector<ResultRow>> produced(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            const auto& sc = grid[task.scenario];
            const auto seed = trial_seed(cfg.base_seed, sc, task.trial);
            SpectralNormOptions spectral = cfg.spectral;
            const auto inst = gen_instance(sc.d, sc.k, sc.r, {sc.noise, sc.sigma, 5}, sc.factor_mode, seed, spectral);
            std::vector<ResultRow> rows;
            for (Method m : task.missing)
                rows.push_back(run_method(inst, sc, m, cfg, task.trial));
            std::lock_guard lock(writer);
            for (const auto& row : rows)
                append << format_row(row) << '\n';
            append.flush();
            produced[i] = std::move(rows);
        }
    };
    const int nthreads = std::min<int>(cfg.threads, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
    }
    if (append.is_open()) {
        append.close();
        if (!append)
            throw io_error("failed appending to '" + csv.string() + "'");
    }

    for (auto& rows : produced)
        for (auto& row : rows)
            done.insert_or_assign(row.key(), std::move(row));

    // Canonical order: scenario grid, then trial, then configured method order.
    std::vector<ResultRow> ordered;
    for (const auto& sc : grid)
        for (int t = 0; t < cfg.trials; ++t)
            for (Method m : cfg.methods) {
                ResultRow::Key key{to_string(m), sc.k, sc.d, sc.r, orthotensor::to_string(sc.noise), sc.sigma, t};
                auto it = done.find(key);
                if (it != done.end()) {
                    ordered.push_back(std::move(it->second));
                    done.erase(it);
                }
            }
    // Rows from other sweeps sharing the file are kept after this sweep's rows.
    std::vector<ResultRow> file_rows = ordered;
    for (auto& [key, row] : done)
        file_rows.push_back(std::move(row));
    write_csv(csv, file_rows);
    if (stats) {
        stats->computed = 0;
        for (const auto& rows : produced)
            stats->computed += rows.size();
        stats->reused = reused;
    }
    return ordered;
}

/// Linear-interpolation quantile of sorted values (numpy's default rule).
inline double quantile_sorted(const std::vector<double>& sorted, double p)
{
    if (sorted.empty())
        return std::nan("");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Per (method, scenario) statistics of avg_loss and runtime, in order of first appearance.
inline nlohmann::json summarize(const std::vector<ResultRow>& rows)
{
    using CellKey = std::tuple<std::string, int, int, int, std::string, double>;
    std::vector<CellKey> order;
    std::map<CellKey, std::vector<const ResultRow*>> cells;
    for (const auto& row : rows) {
        CellKey key{row.method, row.k, row.d, row.r, row.noise_model, row.sigma};
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted)
            order.push_back(key);
        it->second.push_back(&row);
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& key : order) {
        const auto& members = cells[key];
        std::vector<double> losses;
        double runtime = 0.0;
        for (const auto* row : members) {
            if (std::isfinite(row->avg_loss))
                losses.push_back(row->avg_loss);
            runtime += row->runtime_ms;
        }
        std::sort(losses.begin(), losses.end());
        double mean = 0.0;
        for (double l : losses)
            mean += l;
        mean = losses.empty() ? std::nan("") : mean / static_cast<double>(losses.size());
        auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
        out.push_back({{"method", std::get<0>(key)},
                       {"k", std::get<1>(key)},
                       {"d", std::get<2>(key)},
                       {"r", std::get<3>(key)},
                       {"noise_model", std::get<4>(key)},
                       {"sigma", std::get<5>(key)},
                       {"trials", members.size()},
                       {"mean_avg_loss", num(mean)},
                       {"median_avg_loss", num(quantile_sorted(losses, 0.5))},
                       {"q05_avg_loss", num(quantile_sorted(losses, 0.05))},
                       {"q95_avg_loss", num(quantile_sorted(losses, 0.95))},
                       {"mean_runtime_ms", runtime / static_cast<double>(members.size())}});
    }
    return out;
}

} // namespace orthotensor::bench
