#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "falc/instance_io.hpp"
#include "falc/matrix_io.hpp"

namespace falc::cli {

using nlohmann::json;

namespace {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"robust_pca", "stable_pcp", "basis_pursuit",
                                                "matrix_completion"};
    return names;
}

bool table_preset(const ProblemConfig& p) {
    return p.preset == "robust_pca" || p.preset == "stable_pcp";
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
            throw ConfigError(std::string("unknown field '") + it.key() + "' in " + where);
    }
}

json problem_to_json(const ProblemConfig& p) {
    return {{"preset", p.preset},           {"instance", p.instance},
            {"n", p.n},                     {"rank_frac", p.rank_frac},
            {"sparse_frac", p.sparse_frac}, {"rho_noise", p.rho_noise},
            {"noise", p.noise},             {"mu2", p.mu2},
            {"sparsity", p.sparsity},       {"rows", p.rows},
            {"rank", p.rank},               {"sample_frac", p.sample_frac}};
}

ProblemConfig problem_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("'problem' must be an object");
    reject_unknown(j, {"preset", "instance", "n", "rank_frac", "sparse_frac", "rho_noise", "noise", "mu2",
                       "sparsity", "rows", "rank", "sample_frac"},
                   "problem");
    ProblemConfig p;
    read_field(j, "preset", p.preset);
    read_field(j, "instance", p.instance);
    read_field(j, "n", p.n);
    read_field(j, "rank_frac", p.rank_frac);
    read_field(j, "sparse_frac", p.sparse_frac);
    read_field(j, "rho_noise", p.rho_noise);
    read_field(j, "noise", p.noise);
    read_field(j, "mu2", p.mu2);
    read_field(j, "sparsity", p.sparsity);
    read_field(j, "rows", p.rows);
    read_field(j, "rank", p.rank);
    read_field(j, "sample_frac", p.sample_frac);
    return p;
}

json metrics_to_json(const MetricsRow& m) {
    json out = json::object();
    const auto names = metric_names();
    const auto values = metric_values(m);
    for (std::size_t i = 0; i < names.size(); ++i) out[std::string(names[i])] = values[i];
    return out;
}

std::size_t thread_cap() {
    const char* env = std::getenv("FALC_THREADS");
    if (!env || !*env) return 1;
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
    if (ec != std::errc{} || *ptr != '\0' || v == 0)
        throw ConfigError(std::string("FALC_THREADS must be a positive integer, got '") + env + "'");
    return v;
}

void open_out(std::ofstream& f, const std::filesystem::path& path) {
    f.open(path);
    if (!f) throw ConfigError("cannot write " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
}

DenseMatrix column(const DenseVector& v) {
    DenseMatrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.span().begin());
    return m;
}

ProgressCallback verbose_callback(const RunConfig& config, std::ostream& log) {
    if (!config.verbose) return {};
    return [&log](const IterationRecord& r) {
        log << "k=" << r.k << " lambda=" << format_real(r.lambda) << " residual=" << format_real(r.residual_norm)
            << " objective=" << format_real(r.objective) << " steps=" << r.inner_steps
            << " branch=" << to_string(r.branch) << " svd=" << r.svd_count << '\n';
    };
}

}  // namespace

std::uint64_t RunConfig::seed_for(std::size_t trial) const {
    if (trial < seeds.size()) return seeds[trial];
    return seeds.back() + (trial - seeds.size() + 1);
}

void RunConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (output.empty()) throw ConfigError("output path is empty");
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), problem.preset) == names.end())
        throw ConfigError("unknown problem preset '" + problem.preset + "'");
    if (!problem.instance.empty()) {
        if (!table_preset(problem))
            throw ConfigError("instance directories hold robust_pca / stable_pcp data only");
        if (!std::filesystem::is_directory(problem.instance))
            throw ConfigError("instance directory '" + problem.instance + "' does not exist");
    }
    if (problem.noise != "uniform" && problem.noise != "gaussian")
        throw ConfigError("noise must be uniform or gaussian");
    if (problem.n == 0) throw ConfigError("n must be positive");
    if (problem.preset == "stable_pcp" && problem.instance.empty() && !(problem.rho_noise > 0.0))
        throw ConfigError("stable_pcp needs rho_noise > 0");
    if (command == Command::Bench && !table_preset(problem))
        throw ConfigError("bench supports robust_pca and stable_pcp");
    if (command == Command::Generate && !table_preset(problem))
        throw ConfigError("generate supports robust_pca and stable_pcp");
    try {
        solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
}

bool params_equal(const SolverParams& a, const SolverParams& b) {
    return to_json(a) == to_json(b);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.problem == b.problem && params_equal(a.solver, b.solver) &&
           a.seeds == b.seeds && a.output == b.output && a.format == b.format && a.trials == b.trials &&
           a.verbose == b.verbose;
}

std::string_view to_string(Command c) noexcept {
    switch (c) {
    case Command::Solve: return "solve";
    case Command::Generate: return "generate";
    case Command::Bench: return "bench";
    }
    return "unknown";
}

Command parse_command(std::string_view text) {
    if (text == "solve") return Command::Solve;
    if (text == "generate") return Command::Generate;
    if (text == "bench") return Command::Bench;
    throw ConfigError("unknown command '" + std::string(text) + "'");
}

SolverParams default_params(const ProblemConfig& problem) {
    if (problem.preset == "stable_pcp") return stable_pcp_params();
    if (problem.preset == "basis_pursuit") return basis_pursuit_params();
    return robust_pca_params();
}

json to_json(const SolverParams& p) {
    return {{"c_lambda", p.c_lambda},
            {"c_tau", p.c_tau},
            {"c_xi", p.c_xi},
            {"cbar_lambda", p.cbar_lambda},
            {"cbar_tau", p.cbar_tau},
            {"cbar_xi", p.cbar_xi},
            {"joint_tolerance", p.joint_tolerance},
            {"stagnation", p.stagnation},
            {"stagnation_norm", std::string(to_string(p.stagnation_norm))},
            {"subgradient_stop", p.subgradient_stop},
            {"varsigma_x", p.varsigma_x},
            {"varsigma_s", p.varsigma_s},
            {"varsigma_y", p.varsigma_y},
            {"max_outer", p.max_outer},
            {"max_inner", p.max_inner},
            {"eps_init_factor", p.eps_init_factor},
            {"schedule", std::string(to_string(p.schedule))},
            {"nu", p.nu},
            {"b_x", p.b_x}};
}

SolverParams params_from_json(const json& j, SolverParams p) {
    if (!j.is_object()) throw ConfigError("'solver' must be an object");
    reject_unknown(j, {"c_lambda", "c_tau", "c_xi", "cbar_lambda", "cbar_tau", "cbar_xi", "joint_tolerance",
                       "stagnation", "stagnation_norm", "subgradient_stop", "varsigma_x", "varsigma_s",
                       "varsigma_y", "max_outer", "max_inner", "eps_init_factor", "schedule", "nu", "b_x"},
                   "solver");
    read_field(j, "c_lambda", p.c_lambda);
    read_field(j, "c_tau", p.c_tau);
    read_field(j, "c_xi", p.c_xi);
    read_field(j, "cbar_lambda", p.cbar_lambda);
    read_field(j, "cbar_tau", p.cbar_tau);
    read_field(j, "cbar_xi", p.cbar_xi);
    read_field(j, "joint_tolerance", p.joint_tolerance);
    read_field(j, "stagnation", p.stagnation);
    if (auto it = j.find("stagnation_norm"); it != j.end()) {
        try {
            p.stagnation_norm = parse_norm_index(it->get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    read_field(j, "subgradient_stop", p.subgradient_stop);
    read_field(j, "varsigma_x", p.varsigma_x);
    read_field(j, "varsigma_s", p.varsigma_s);
    read_field(j, "varsigma_y", p.varsigma_y);
    read_field(j, "max_outer", p.max_outer);
    read_field(j, "max_inner", p.max_inner);
    read_field(j, "eps_init_factor", p.eps_init_factor);
    if (auto it = j.find("schedule"); it != j.end()) {
        try {
            p.schedule = parse_schedule_mode(it->get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    read_field(j, "nu", p.nu);
    read_field(j, "b_x", p.b_x);
    return p;
}

json to_json(const RunConfig& c) {
    return {{"command", std::string(to_string(c.command))},
            {"problem", problem_to_json(c.problem)},
            {"solver", to_json(c.solver)},
            {"seeds", c.seeds},
            {"output", c.output.string()},
            {"format", c.format},
            {"trials", c.trials},
            {"verbose", c.verbose}};
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        reject_unknown(j, {"command", "problem", "solver", "seeds", "output", "format", "trials", "verbose"},
                       "config");
        RunConfig c;
        if (auto it = j.find("command"); it != j.end()) c.command = parse_command(it->get<std::string>());
        if (auto it = j.find("problem"); it != j.end()) c.problem = problem_from_json(*it);
        c.solver = default_params(c.problem);
        if (auto it = j.find("solver"); it != j.end()) c.solver = params_from_json(*it, c.solver);
        read_field(j, "seeds", c.seeds);
        if (auto it = j.find("output"); it != j.end()) c.output = it->get<std::string>();
        read_field(j, "format", c.format);
        read_field(j, "trials", c.trials);
        read_field(j, "verbose", c.verbose);
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

BuiltProblem build_problem(const ProblemConfig& p, std::uint64_t seed) {
    BuiltProblem out;
    if (p.preset == "robust_pca" || p.preset == "stable_pcp") {
        Instance inst = p.instance.empty()
                            ? generate_instance(p.n, p.rank_frac, p.sparse_frac, p.rho_noise, seed,
                                                p.noise == "gaussian" ? NoiseModel::Gaussian : NoiseModel::Uniform)
                            : read_instance(p.instance);
        const double n = static_cast<double>(inst.d.rows());
        const double mu2 = p.mu2 > 0.0 ? p.mu2 : 1.0 / std::sqrt(n);
        out.spec = p.preset == "robust_pca" ? preset_robust_pca(inst.d, mu2)
                                            : preset_stable_pcp(inst.d, mu2, inst.rho_noise);
        out.truth = std::move(inst.truth);
    } else if (p.preset == "basis_pursuit") {
        SparseInstance inst = generate_sparse(p.n, p.sparsity, p.rows, seed);
        out.spec = preset_basis_pursuit(inst.a, inst.b);
        out.sparse = std::move(inst);
    } else if (p.preset == "matrix_completion") {
        CompletionInstance inst = generate_completion(p.n, p.rank, p.sample_frac, seed);
        out.spec = preset_matrix_completion(inst.omega, inst.values, p.n, p.n);
        out.completion = std::move(inst);
    } else {
        throw ConfigError("unknown problem preset '" + p.preset + "'");
    }
    return out;
}

std::string format_real(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

json report_to_json(const SolveReport& r, const std::optional<MetricsRow>& metrics) {
    json hist = json::array();
    for (const auto& h : r.history) {
        hist.push_back({{"k", h.k},
                        {"lambda", h.lambda},
                        {"epsilon", h.epsilon},
                        {"tau_x", h.tau_x},
                        {"tau_s", h.tau_s},
                        {"xi", h.xi},
                        {"eta", h.eta},
                        {"budget", h.budget},
                        {"inner_steps", h.inner_steps},
                        {"branch", std::string(to_string(h.branch))},
                        {"residual_norm", h.residual_norm},
                        {"block_residuals", h.block_residuals},
                        {"objective", h.objective},
                        {"multiplier_norm", h.multiplier_norm},
                        {"svd_count", h.svd_count},
                        {"g_x_norm", h.g_x_norm},
                        {"g_s_norm", h.g_s_norm},
                        {"phi", h.phi},
                        {"bounds",
                         {{"checked", h.bounds.checked},
                          {"grad_x_norm", h.bounds.grad_x_norm},
                          {"grad_x_bound", h.bounds.grad_x_bound},
                          {"grad_s_norm", h.bounds.grad_s_norm},
                          {"grad_s_bound", h.bounds.grad_s_bound},
                          {"holds", h.bounds.holds}}}});
    }
    json out{{"termination", std::string(to_string(r.termination))},
             {"objective", r.objective},
             {"residuals", r.residuals},
             {"outer_iterations", r.outer_iterations},
             {"total_inner_iterations", r.total_inner_iterations},
             {"svd_count", r.svd_count},
             {"lipschitz", r.lipschitz},
             {"wall_time", r.wall_time},
             {"history", std::move(hist)}};
    if (metrics) out["metrics"] = metrics_to_json(*metrics);
    return out;
}

void write_history_csv(std::ostream& out, const SolveReport& r) {
    out << "k,lambda,eps,residual_2,objective,svd_count,branch\n";
    for (const auto& h : r.history) {
        out << h.k << ',' << format_real(h.lambda) << ',' << format_real(h.epsilon) << ','
            << format_real(h.residual_norm) << ',' << format_real(h.objective) << ',' << h.svd_count << ','
            << to_string(h.branch) << '\n';
    }
}

BenchSummary summarize(const std::vector<TrialRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("summarize: no trials");
    const std::size_t f = metric_names().size();
    std::vector<double> sum(f, 0.0), lo(f, std::numeric_limits<double>::infinity()),
        hi(f, -std::numeric_limits<double>::infinity());
    for (const auto& r : rows) {
        const auto v = metric_values(r.metrics);
        for (std::size_t i = 0; i < f; ++i) {
            sum[i] += v[i];
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    }
    // The mean is clamped so that rounding never breaks min <= average <= max.
    for (std::size_t i = 0; i < f; ++i)
        sum[i] = std::clamp(sum[i] / static_cast<double>(rows.size()), lo[i], hi[i]);
    return {metrics_from_values(sum), metrics_from_values(lo), metrics_from_values(hi), rows.size()};
}

void write_summary_csv(std::ostream& out, const BenchSummary& s) {
    const auto names = metric_names();
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << '\n';
    for (const MetricsRow* row : {&s.average, &s.min, &s.max}) {
        const auto v = metric_values(*row);
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_real(v[i]);
        out << '\n';
    }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << "seed";
    for (auto name : metric_names()) out << ',' << name;
    out << '\n';
    for (const auto& r : rows) {
        out << r.seed;
        for (double v : metric_values(r.metrics)) out << ',' << format_real(v);
        out << '\n';
    }
}

int run_solve(const RunConfig& config, std::ostream& log) {
    const std::uint64_t seed = config.seed_for(0);
    BuiltProblem built = build_problem(config.problem, seed);
    const SolveReport report = solve(built.spec, config.solver, verbose_callback(config, log));

    std::optional<MetricsRow> metrics;
    if (built.truth) metrics = compute_metrics(report, *built.truth, built.spec);
    json j = report_to_json(report, metrics);
    j["problem"] = built.spec.label;
    j["seed"] = seed;
    j["config"] = to_json(config);
    if (built.sparse) {
        const SparseRecovery rec = sparse_recovery(report, *built.sparse);
        j["recovery"] = {{"rel_err", rec.rel_err}, {"support_exact", rec.support_exact},
                         {"slack_support_exact", rec.slack_support_exact}};
    }
    if (built.completion) {
        DenseMatrix diff = report.x_final - built.completion->x0;
        j["recovery"] = {{"rel_err", frobenius_norm(diff) / frobenius_norm(built.completion->x0)}};
    }

    ensure_dir(config.output);
    save_matrix(config.output / "X.fmat", report.x_final);
    for (std::size_t i = 0; i < report.s_final.size(); ++i)
        if (report.s_final[i].size()) save_matrix(config.output / ("s" + std::to_string(i) + ".fmat"), column(report.s_final[i]));
    for (std::size_t i = 0; i < report.y_final.size(); ++i)
        if (report.y_final[i].size()) save_matrix(config.output / ("y" + std::to_string(i) + ".fmat"), column(report.y_final[i]));
    std::ofstream rep, hist;
    open_out(rep, config.output / "report.json");
    rep << j.dump(2) << '\n';
    open_out(hist, config.output / "history.csv");
    write_history_csv(hist, report);

    log << "termination=" << to_string(report.termination) << " outer=" << report.outer_iterations
        << " svd=" << report.svd_count << " objective=" << format_real(report.objective) << '\n';
    return report.termination == Termination::MaxOuter ? kMaxOuter : kOk;
}

int run_generate(const RunConfig& config, std::ostream& log) {
    const auto& p = config.problem;
    const NoiseModel noise = p.noise == "gaussian" ? NoiseModel::Gaussian : NoiseModel::Uniform;
    for (std::size_t t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = config.seed_for(t);
        const Instance inst = generate_instance(p.n, p.rank_frac, p.sparse_frac, p.rho_noise, seed, noise);
        const auto dir = config.trials == 1 ? config.output : config.output / ("seed_" + std::to_string(seed));
        try {
            write_instance(dir, inst);
        } catch (const MatrixFormatError& e) {
            throw ConfigError(e.what());
        }
        log << "wrote " << dir.string() << '\n';
    }
    return kOk;
}

int run_bench(const RunConfig& config, std::ostream& log) {
    const std::size_t trials = config.trials;
    std::vector<std::optional<TrialRow>> rows(trials);
    std::vector<std::string> errors(trials);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            const std::uint64_t seed = config.seed_for(t);
            try {
                BuiltProblem built = build_problem(config.problem, seed);
                const SolveReport report = solve(built.spec, config.solver);
                rows[t] = TrialRow{seed, compute_metrics(report, *built.truth, built.spec)};
                std::lock_guard lock(log_mutex);
                log << "trial " << t << " seed=" << seed << " termination=" << to_string(report.termination)
                    << " svd=" << report.svd_count << '\n';
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    const std::size_t threads = std::min(thread_cap(), trials);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    std::vector<TrialRow> done;
    std::vector<json> failures;
    for (std::size_t t = 0; t < trials; ++t) {
        if (rows[t]) done.push_back(*rows[t]);
        else failures.push_back({{"trial", t}, {"seed", config.seed_for(t)}, {"error", errors[t]}});
    }

    ensure_dir(config.output);
    std::ofstream trials_csv;
    open_out(trials_csv, config.output / "bench_trials.csv");
    write_trials_csv(trials_csv, done);
    const bool complete = failures.empty();
    if (!done.empty()) {
        const BenchSummary s = summarize(done);
        if (config.format == "json") {
            std::ofstream js;
            open_out(js, config.output / "bench_summary.json");
            js << json{{"trials", s.trials},
                       {"complete", complete},
                       {"failures", failures},
                       {"average", metrics_to_json(s.average)},
                       {"min", metrics_to_json(s.min)},
                       {"max", metrics_to_json(s.max)}}
                      .dump(2)
               << '\n';
        } else {
            std::ofstream cs;
            open_out(cs, config.output / "bench_summary.csv");
            write_summary_csv(cs, s);
        }
    }
    if (!complete) {
        std::ofstream fl;
        open_out(fl, config.output / "bench_failures.json");
        fl << json(failures).dump(2) << '\n';
        log << "bench incomplete: " << failures.size() << " of " << trials << " trials failed (partial results)\n";
        return kSolverError;
    }
    log << "bench complete: " << trials << " trials\n";
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"FALC solver for composite norm minimization"};
    app.require_subcommand(1);

    struct Flags {
        std::string config, problem, instance, output, schedule, format, noise;
        std::vector<std::uint64_t> seeds;
        std::optional<std::size_t> trials, n, max_outer;
        std::optional<double> nu, c_lambda, rho_noise;
        bool verbose = false;
    } f;

    auto add_common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON config file");
        sub->add_option("--problem", f.problem, "robust_pca | stable_pcp | basis_pursuit | matrix_completion");
        sub->add_option("--instance", f.instance, "serialized instance directory");
        sub->add_option("--n", f.n, "problem size");
        sub->add_option("--rho-noise", f.rho_noise, "noise level of generated instances");
        sub->add_option("--noise", f.noise, "uniform | gaussian");
        sub->add_option("--seed", f.seeds, "seed(s)");
        sub->add_option("--output", f.output, "output directory");
        sub->add_option("--trials", f.trials, "number of trials");
        sub->add_option("--schedule", f.schedule, "adaptive | geometric");
        sub->add_option("--nu", f.nu, "geometric schedule ratio");
        sub->add_option("--c-lambda", f.c_lambda, "penalty decrease ratio");
        sub->add_option("--max-outer", f.max_outer, "outer iteration cap");
        sub->add_option("--format", f.format, "bench summary format: csv | json");
        sub->add_flag("--verbose", f.verbose, "print one line per outer iteration");
    };
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem instance");
    CLI::App* gen_cmd = app.add_subcommand("generate", "write random instances");
    CLI::App* bench_cmd = app.add_subcommand("bench", "solve several seeds and aggregate metrics");
    for (CLI::App* sub : {solve_cmd, gen_cmd, bench_cmd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    RunConfig config;
    try {
        const Command command = solve_cmd->parsed() ? Command::Solve
                                : gen_cmd->parsed() ? Command::Generate
                                                    : Command::Bench;
        if (!f.config.empty()) {
            config = load_config(f.config);
        } else if (!f.problem.empty()) {
            config.problem.preset = f.problem;
            config.solver = default_params(config.problem);
        }
        config.command = command;
        if (!f.problem.empty() && f.problem != config.problem.preset) {
            config.problem.preset = f.problem;
            config.solver = default_params(config.problem);
        }
        if (!f.instance.empty()) config.problem.instance = f.instance;
        if (f.n) config.problem.n = *f.n;
        if (f.rho_noise) config.problem.rho_noise = *f.rho_noise;
        if (!f.noise.empty()) config.problem.noise = f.noise;
        if (!f.seeds.empty()) config.seeds = f.seeds;
        if (!f.output.empty()) config.output = f.output;
        if (f.trials) config.trials = *f.trials;
        if (!f.schedule.empty()) {
            try {
                config.solver.schedule = parse_schedule_mode(f.schedule);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (f.nu) config.solver.nu = *f.nu;
        if (f.c_lambda) config.solver.c_lambda = *f.c_lambda;
        if (f.max_outer) config.solver.max_outer = *f.max_outer;
        if (!f.format.empty()) config.format = f.format;
        if (f.verbose) config.verbose = true;
        config.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        switch (config.command) {
        case Command::Solve: return run_solve(config, out);
        case Command::Generate: return run_generate(config, out);
        case Command::Bench: return run_bench(config, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << '\n';
        return kSolverError;
    }
    return kSolverError;
}

}  // namespace falc::cli
