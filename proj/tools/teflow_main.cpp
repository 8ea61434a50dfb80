// teflow command-line front end: simulation, pairwise estimation, coupling
// sweeps, and net-flow tables, all through the public C API.

#include "teflow/teflow.h"

#include "CLI11.hpp"

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(te_status status) {
    if (status != TE_OK) throw CliError(te_last_error());
}

struct DatasetHandle {
    te_dataset* ptr = nullptr;
    ~DatasetHandle() { te_dataset_free(ptr); }
    te_dataset** out() { return &ptr; }
    te_dataset* get() const { return ptr; }
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("cannot hash input file '" + path + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

/// Sidecar run manifest: a `config.` section that pins every value affecting
/// the numeric output, plus run info that does not.
class Manifest {
public:
    Manifest(std::string command) : command_(std::move(command)) {}

    void set(const std::string& key, const std::string& value) {
        config_[key] = value;
    }
    void set(const std::string& key, double value) { set(key, format_double(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
    void set_input(const std::string& path) {
        set("input", path);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64_file(path));
        set("input_fnv1a64", buf);
    }

    void write(const std::string& out_path, double wall_ms, std::size_t threads) const {
        std::ofstream out(out_path + ".manifest.txt", std::ios::binary);
        if (!out) throw CliError("cannot write manifest next to '" + out_path + "'");
        out << "teflow manifest v1\n";
        out << "command = " << command_ << "\n";
        for (const auto& [k, v] : config_) {
            out << "config." << k << " = " << v << "\n";
        }
        out << "run.version = " << te_version() << "\n";
        out << "run.threads = " << threads << "\n";
        out << "run.wall_ms = " << format_double(wall_ms) << "\n";
    }

private:
    std::string command_;
    std::map<std::string, std::string> config_;  // sorted, reproducible
};

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct EstimatorFlags {
    std::size_t d = 1;
    std::size_t tau = 1;
    std::size_t k = 1;
    int order = 0;
    std::string r_policy = "matched";
    double r_coeff = 1.0;
    std::size_t window = 0;
    std::size_t first_order_m = 0;
    bool zscore = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--d", d, "embedding dimension (use 3 for flow data)")
            ->check(CLI::PositiveNumber);
        cmd.add_option("--tau", tau, "embedding delay in samples")
            ->check(CLI::PositiveNumber);
        cmd.add_option("--k", k, "neighbor count for the marginal estimator")
            ->check(CLI::PositiveNumber);
        cmd.add_option("--order", order, "local model order")
            ->check(CLI::Range(0, 1));
        cmd.add_option("--r-policy", r_policy, "r from sigma: matched|inverse|fixed")
            ->check(CLI::IsMember({"matched", "inverse", "fixed"}));
        cmd.add_option("--r-coeff", r_coeff, "coefficient for inverse/fixed policies");
        cmd.add_option("--window", window, "Theiler exclusion half-width");
        cmd.add_option("--m", first_order_m,
                       "first-order fit size (0 = 2*(d_model+1))");
        cmd.add_flag("--zscore", zscore, "standardize channels before embedding");
    }

    te_options to_options(std::size_t threads) const {
        te_options o;
        te_options_init(&o);
        o.d = d;
        o.tau = tau;
        o.k = k;
        o.order = order;
        o.r_mode = r_policy == "matched"  ? TE_R_MATCHED
                   : r_policy == "inverse" ? TE_R_INVERSE
                                           : TE_R_FIXED;
        o.r_coeff = r_coeff;
        o.exclusion_window = window;
        o.first_order_m = first_order_m;
        o.zscore = zscore ? 1 : 0;
        o.threads = threads;
        return o;
    }

    void record(Manifest& m) const {
        m.set("d", d);
        m.set("tau", tau);
        m.set("k", k);
        m.set("order", static_cast<std::size_t>(order));
        m.set("r_policy", r_policy);
        m.set("r_coeff", r_coeff);
        m.set("window", window);
        m.set("first_order_m", first_order_m);
        m.set("zscore", std::string(zscore ? "1" : "0"));
    }
};

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    // tent / coupled
    double a = 0.5;
    double eps = 0.0;
    double mu = 0.0;
    double x0 = 0.345678;
    double y0 = 0.789012;
    // chua
    te_chua_params chua{};
    double cx0 = 0.1, cy0 = 0.0, cz0 = 0.0;
    std::size_t chua_transient = 10000;
    // shared
    std::size_t n = 500;
    std::size_t transient = 1000;
    std::string out;
};

int run_simulate_common(const char* system, const SimulateArgs& args,
                        std::size_t transient, DatasetHandle& data,
                        Manifest& manifest) {
    Stopwatch watch;
    manifest.set("n", args.n);
    manifest.set("transient", transient);
    check(te_dataset_save_csv(data.get(), args.out.c_str(), ','));
    manifest.write(args.out, watch.elapsed_ms(), 1);
    std::printf("wrote %zu samples x %zu channels to %s (%s)\n",
                te_dataset_length(data.get()), te_dataset_channel_count(data.get()),
                args.out.c_str(), system);
    return 0;
}

int run_simulate_tent(const SimulateArgs& args) {
    DatasetHandle data;
    check(te_simulate_tent(args.a, args.x0, args.n, args.transient, data.out()));
    Manifest manifest("simulate tent");
    manifest.set("a", args.a);
    manifest.set("x0", args.x0);
    return run_simulate_common("tent", args, args.transient, data, manifest);
}

int run_simulate_coupled(const SimulateArgs& args) {
    DatasetHandle data;
    check(te_simulate_coupled(args.a, args.eps, args.mu, args.x0, args.y0, args.n,
                              args.transient, data.out()));
    Manifest manifest("simulate coupled");
    manifest.set("a", args.a);
    manifest.set("eps", args.eps);
    manifest.set("mu", args.mu);
    manifest.set("x0", args.x0);
    manifest.set("y0", args.y0);
    return run_simulate_common("coupled", args, args.transient, data, manifest);
}

int run_simulate_chua(const SimulateArgs& args) {
    DatasetHandle data;
    check(te_simulate_chua(&args.chua, args.cx0, args.cy0, args.cz0, args.n,
                           args.chua_transient, data.out()));
    Manifest manifest("simulate chua");
    manifest.set("alpha", args.chua.alpha);
    manifest.set("beta", args.chua.beta);
    manifest.set("m0", args.chua.m0);
    manifest.set("m1", args.chua.m1);
    manifest.set("dt", args.chua.dt);
    manifest.set("stride", args.chua.stride);
    manifest.set("x0", args.cx0);
    manifest.set("y0", args.cy0);
    manifest.set("z0", args.cz0);
    return run_simulate_common("chua", args, args.chua_transient, data, manifest);
}

// ---- estimate ---------------------------------------------------------------

struct EstimateArgs {
    std::string input;
    std::string source;
    std::string target;
    EstimatorFlags flags;
    std::size_t surrogates = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string dump_logs;
};

int run_estimate(const EstimateArgs& args) {
    Stopwatch watch;
    DatasetHandle data;
    check(te_dataset_load_csv(args.input.c_str(), ',', data.out()));

    const te_options options = args.flags.to_options(1);
    te_pair_result result{};
    check(te_estimate_pair(data.get(), args.source.c_str(), args.target.c_str(),
                           &options, &result));

    std::printf("I_{%s->%s} = %.6f bits/step  (r joint %.6g, self %.6g)\n",
                args.source.c_str(), args.target.c_str(), result.te_forward,
                result.r_joint_forward, result.r_self_forward);
    std::printf("I_{%s->%s} = %.6f bits/step  (r joint %.6g, self %.6g)\n",
                args.target.c_str(), args.source.c_str(), result.te_backward,
                result.r_joint_backward, result.r_self_backward);
    std::printf("directionality index = %.6f\n", result.directionality);
    std::printf("samples = %zu, clamped log ratios = %zu/%zu\n", result.n_samples,
                result.clamped_forward, result.clamped_backward);

    te_surrogate_summary surrogate{};
    if (args.surrogates > 0) {
        check(te_surrogate_baseline(data.get(), args.source.c_str(),
                                    args.target.c_str(), &options, args.surrogates,
                                    args.seed, &surrogate));
        std::printf("surrogate baseline (%zu shifts, seed %" PRIu64
                    "): mean %.6f, std %.6f\n",
                    surrogate.n_surrogates, args.seed, surrogate.mean,
                    surrogate.stddev);
    }

    Manifest manifest("estimate");
    manifest.set_input(args.input);
    manifest.set("source", args.source);
    manifest.set("target", args.target);
    args.flags.record(manifest);
    manifest.set("surrogates", args.surrogates);
    manifest.set("seed", static_cast<std::size_t>(args.seed));

    if (!args.dump_logs.empty()) {
        std::vector<double> logs(result.n_samples);
        std::size_t n = 0;
        check(te_estimate_logs(data.get(), args.source.c_str(), args.target.c_str(),
                               &options, logs.data(), logs.size(), &n));
        std::ofstream out(args.dump_logs, std::ios::binary);
        if (!out) throw CliError("cannot write '" + args.dump_logs + "'");
        out << "sample,log2_ratio\n";
        for (std::size_t i = 0; i < n; ++i) {
            out << i << ',' << format_double(logs[i]) << '\n';
        }
        out.close();
        manifest.write(args.dump_logs, watch.elapsed_ms(), 1);
    }

    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw CliError("cannot write '" + args.out + "'");
        out << "metric,value\n";
        out << "te_forward_bits," << format_double(result.te_forward) << '\n';
        out << "te_backward_bits," << format_double(result.te_backward) << '\n';
        out << "directionality," << format_double(result.directionality) << '\n';
        out << "r_joint_forward," << format_double(result.r_joint_forward) << '\n';
        out << "r_self_forward," << format_double(result.r_self_forward) << '\n';
        out << "r_joint_backward," << format_double(result.r_joint_backward) << '\n';
        out << "r_self_backward," << format_double(result.r_self_backward) << '\n';
        out << "n_samples," << result.n_samples << '\n';
        if (args.surrogates > 0) {
            out << "surrogate_mean," << format_double(surrogate.mean) << '\n';
            out << "surrogate_std," << format_double(surrogate.stddev) << '\n';
        }
        out.close();
        manifest.write(args.out, watch.elapsed_ms(), 1);
    }
    return 0;
}

// ---- sweep -------------------------------------------------------------------

struct SweepArgs {
    double a = 0.5;
    double eps_min = 0.0, eps_max = 1.0;
    double mu_min = 0.0, mu_max = 1.0;
    std::size_t eps_steps = 11, mu_steps = 11;
    double x0 = 0.345678, y0 = 0.789012;
    std::size_t n = 500;
    std::size_t transient = 1000;
    EstimatorFlags flags;
    std::size_t threads = 1;
    std::string out;
};

struct SweepCell {
    double eps = 0.0;
    double mu = 0.0;
    double sync_err = 0.0;
    double i_xy = 0.0;
    double i_yx = 0.0;
};

double grid_value(double lo, double hi, std::size_t steps, std::size_t i) {
    if (steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

int run_sweep(const SweepArgs& args) {
    if (args.eps_min < 0 || args.eps_max > 1 || args.mu_min < 0 || args.mu_max > 1 ||
        args.eps_min > args.eps_max || args.mu_min > args.mu_max) {
        throw CliError("sweep grid bounds must satisfy 0 <= min <= max <= 1");
    }
    Stopwatch watch;

    std::vector<SweepCell> cells(args.eps_steps * args.mu_steps);
    for (std::size_t i = 0; i < args.eps_steps; ++i) {
        for (std::size_t j = 0; j < args.mu_steps; ++j) {
            SweepCell& cell = cells[i * args.mu_steps + j];
            cell.eps = grid_value(args.eps_min, args.eps_max, args.eps_steps, i);
            cell.mu = grid_value(args.mu_min, args.mu_max, args.mu_steps, j);
        }
    }

    const te_options options = args.flags.to_options(1);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= cells.size() || failed.load()) break;
            SweepCell& cell = cells[slot];
            try {
                DatasetHandle data;
                check(te_simulate_coupled(args.a, cell.eps, cell.mu, args.x0, args.y0,
                                          args.n, args.transient, data.out()));
                check(te_sync_error(data.get(), &cell.sync_err));
                te_pair_result pair{};
                check(te_estimate_pair(data.get(), "x", "y", &options, &pair));
                cell.i_xy = pair.te_forward;
                cell.i_yx = pair.te_backward;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed = true;
                if (failure_message.empty()) {
                    std::ostringstream msg;
                    msg << "sweep cell (eps=" << cell.eps << ", mu=" << cell.mu
                        << ") failed: " << e.what();
                    failure_message = msg.str();
                }
            }
        }
    };

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(args.threads, cells.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed) throw CliError(failure_message);

    // Cells are already in (eps, mu) order; emission is single-writer, so the
    // bytes do not depend on the thread count.
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw CliError("cannot write '" + args.out + "'");
    out << "eps,mu,sync_err,I_xy,I_yx\n";
    for (const SweepCell& cell : cells) {
        out << format_double(cell.eps) << ',' << format_double(cell.mu) << ','
            << format_double(cell.sync_err) << ',' << format_double(cell.i_xy) << ','
            << format_double(cell.i_yx) << '\n';
    }
    out.close();

    Manifest manifest("sweep");
    manifest.set("a", args.a);
    manifest.set("eps_min", args.eps_min);
    manifest.set("eps_max", args.eps_max);
    manifest.set("eps_steps", args.eps_steps);
    manifest.set("mu_min", args.mu_min);
    manifest.set("mu_max", args.mu_max);
    manifest.set("mu_steps", args.mu_steps);
    manifest.set("x0", args.x0);
    manifest.set("y0", args.y0);
    manifest.set("n", args.n);
    manifest.set("transient", args.transient);
    args.flags.record(manifest);
    manifest.write(args.out, watch.elapsed_ms(), workers);

    std::printf("wrote %zu grid cells to %s\n", cells.size(), args.out.c_str());
    return 0;
}

// ---- netflow -----------------------------------------------------------------

struct NetflowArgs {
    std::string input;
    EstimatorFlags flags;
    std::size_t threads = 1;
    std::string out;
};

int run_netflow(const NetflowArgs& args) {
    Stopwatch watch;
    DatasetHandle data;
    check(te_dataset_load_csv(args.input.c_str(), ',', data.out()));
    const std::size_t p = te_dataset_channel_count(data.get());
    if (p < 2) throw CliError("net flow needs at least 2 channels");

    const te_options options = args.flags.to_options(args.threads);
    std::vector<double> matrix(p * p), net(p);
    check(te_net_flow(data.get(), &options, matrix.data(), net.data()));

    std::printf("TE matrix (bits/step), entry [row -> column]:\n%10s", "");
    for (std::size_t j = 0; j < p; ++j) {
        std::printf(" %10s", te_dataset_channel_name(data.get(), j));
    }
    std::printf("\n");
    for (std::size_t i = 0; i < p; ++i) {
        std::printf("%10s", te_dataset_channel_name(data.get(), i));
        for (std::size_t j = 0; j < p; ++j) {
            std::printf(" %10.4f", matrix[i * p + j]);
        }
        std::printf("\n");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p; ++i) total += net[i];
    std::printf("net flow:\n");
    for (std::size_t i = 0; i < p; ++i) {
        std::printf("  T[%s] = %.6f\n", te_dataset_channel_name(data.get(), i), net[i]);
    }
    std::printf("sum(T) = %.3e\n", total);

    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw CliError("cannot write '" + args.out + "'");
        out << "from,to,te_bits\n";
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                out << te_dataset_channel_name(data.get(), i) << ','
                    << te_dataset_channel_name(data.get(), j) << ','
                    << format_double(matrix[i * p + j]) << '\n';
            }
        }
        out.close();

        Manifest manifest("netflow");
        manifest.set_input(args.input);
        args.flags.record(manifest);
        manifest.write(args.out, watch.elapsed_ms(), args.threads);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"teflow: directed information transfer between time series"};
    app.require_subcommand(1);

    // simulate
    SimulateArgs sim;
    te_chua_params_init(&sim.chua);
    CLI::App* simulate = app.add_subcommand("simulate", "generate test-system data");
    simulate->require_subcommand(1);

    CLI::App* tent = simulate->add_subcommand("tent", "solo skew tent map");
    tent->add_option("--a", sim.a, "apex parameter in (0,1)");
    tent->add_option("--x0", sim.x0, "initial state in [0,1]");
    tent->add_option("--n", sim.n, "samples to keep")->check(CLI::PositiveNumber);
    tent->add_option("--transient", sim.transient, "iterates to discard");
    tent->add_option("--out", sim.out, "output CSV path")->required();

    CLI::App* coupled = simulate->add_subcommand("coupled", "coupled tent maps");
    coupled->add_option("--a", sim.a, "apex parameter in (0,1)");
    coupled->add_option("--eps", sim.eps, "coupling of y into x");
    coupled->add_option("--mu", sim.mu, "coupling of x into y");
    coupled->add_option("--x0", sim.x0, "x seed in [0,1]");
    coupled->add_option("--y0", sim.y0, "y seed in [0,1]");
    coupled->add_option("--n", sim.n, "samples to keep")->check(CLI::PositiveNumber);
    coupled->add_option("--transient", sim.transient, "iterates to discard");
    coupled->add_option("--out", sim.out, "output CSV path")->required();

    CLI::App* chua = simulate->add_subcommand("chua", "Chua double-scroll circuit");
    chua->add_option("--alpha", sim.chua.alpha, "alpha");
    chua->add_option("--beta", sim.chua.beta, "beta");
    chua->add_option("--m0", sim.chua.m0, "inner diode slope");
    chua->add_option("--m1", sim.chua.m1, "outer diode slope");
    chua->add_option("--dt", sim.chua.dt, "integration step");
    chua->add_option("--stride", sim.chua.stride, "record every stride-th step")
        ->check(CLI::PositiveNumber);
    chua->add_option("--x0", sim.cx0, "initial v1");
    chua->add_option("--y0", sim.cy0, "initial v2");
    chua->add_option("--z0", sim.cz0, "initial il");
    chua->add_option("--n", sim.n, "samples to keep")->check(CLI::PositiveNumber);
    chua->add_option("--transient", sim.chua_transient, "integration steps to discard");
    chua->add_option("--out", sim.out, "output CSV path")->required();

    // estimate
    EstimateArgs est;
    CLI::App* estimate =
        app.add_subcommand("estimate", "directed TE between two channels");
    estimate->add_option("--input", est.input, "input CSV")->required();
    estimate->add_option("--source", est.source, "source channel name")->required();
    estimate->add_option("--target", est.target, "target channel name")->required();
    est.flags.attach(*estimate);
    estimate->add_option("--surrogates", est.surrogates,
                         "time-shift surrogate count (0 = off, else >= 19)");
    estimate->add_option("--seed", est.seed, "surrogate RNG seed");
    estimate->add_option("--out", est.out, "write a metric,value CSV report");
    estimate->add_option("--dump-logs", est.dump_logs,
                         "write per-sample log2 ratios (forward direction)");

    // sweep
    SweepArgs sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "TE + sync error over an (eps, mu) grid");
    sweep_cmd->add_option("--a", sweep.a, "apex parameter");
    sweep_cmd->add_option("--eps-min", sweep.eps_min, "grid lower bound");
    sweep_cmd->add_option("--eps-max", sweep.eps_max, "grid upper bound");
    sweep_cmd->add_option("--eps-steps", sweep.eps_steps, "grid points")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--mu-min", sweep.mu_min, "grid lower bound");
    sweep_cmd->add_option("--mu-max", sweep.mu_max, "grid upper bound");
    sweep_cmd->add_option("--mu-steps", sweep.mu_steps, "grid points")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--x0", sweep.x0, "x seed");
    sweep_cmd->add_option("--y0", sweep.y0, "y seed");
    sweep_cmd->add_option("--n", sweep.n, "samples per cell")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--transient", sweep.transient, "iterates to discard");
    sweep.flags.attach(*sweep_cmd);
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep.out, "output CSV path")->required();

    // netflow
    NetflowArgs netflow;
    CLI::App* netflow_cmd =
        app.add_subcommand("netflow", "pairwise TE matrix and net flows");
    netflow_cmd->add_option("--input", netflow.input, "input CSV")->required();
    netflow.flags.attach(*netflow_cmd);
    netflow_cmd->add_option("--threads", netflow.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    netflow_cmd->add_option("--out", netflow.out, "write from,to,te_bits CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tent->parsed()) return run_simulate_tent(sim);
        if (coupled->parsed()) return run_simulate_coupled(sim);
        if (chua->parsed()) return run_simulate_chua(sim);
        if (estimate->parsed()) return run_estimate(est);
        if (sweep_cmd->parsed()) return run_sweep(sweep);
        if (netflow_cmd->parsed()) return run_netflow(netflow);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
