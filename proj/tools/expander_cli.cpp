// Command-line front end: matrix generation, tail-bound evaluation,
// phase-transition sweeps and Monte Carlo experiments, emitting CSV with
// '#'-prefixed manifest comments for reproducibility.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "expander/dyadic.hpp"
#include "expander/entropy.hpp"
#include "expander/errors.hpp"
#include "expander/matrix.hpp"
#include "expander/montecarlo.hpp"
#include "expander/phase.hpp"
#include "expander/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Malformed flag values (grid specs, k lists): exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_threads() {
    if (const char* env = std::getenv("EXPANDER_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // library default (all cores)
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw expander::DomainError("cannot open output file: " + path);
    out << content;
}

/// Deterministic manifest lines (no timestamps: reruns must be byte-identical).
std::vector<std::string> manifest(const std::string& subcommand,
                                  const std::string& params) {
    return {std::string("expander ") + expander::kVersion,
            "subcommand: " + subcommand,
            "params: " + params};
}

// ---- grid spec parsing ----

std::vector<double> parse_linear_grid(const std::string& spec) {
    // "start:stop:count", linear spacing
    double start = 0, stop = 0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 1 || !(in >> std::ws).eof())
        throw UsageError("bad grid spec '" + spec + "' (want start:stop:count)");
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = start;
    } else {
        for (int i = 0; i < count; ++i)
            grid[i] = start + (stop - start) * i / (count - 1);
    }
    return grid;
}

std::vector<uint32_t> parse_k_list(const std::string& spec) {
    std::vector<uint32_t> ks;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        long v = 0;
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw UsageError("bad k value '" + tok + "'");
        }
        if (v < 1) throw UsageError("k values must be >= 1");
        ks.push_back(static_cast<uint32_t>(v));
    }
    if (ks.empty()) throw UsageError("empty k grid");
    return ks;
}

// ---- subcommands ----

struct GenerateArgs {
    uint32_t n = 0, N = 0, d = 0;
    std::string ensemble = "SE";
    uint64_t seed = 0;
    std::string out;
    int threads = -1;
};

int run_generate(const GenerateArgs& a) {
    const auto ens = expander::ensemble_from_string(a.ensemble);
    const int threads = a.threads >= 0 ? a.threads : default_threads();
    const auto m = expander::generate(a.n, a.N, a.d, ens, a.seed, threads);

    std::ostringstream body;
    for (const auto& line :
         manifest("generate", "n=" + std::to_string(a.n) + " N=" + std::to_string(a.N) +
                                  " d=" + std::to_string(a.d) + " ensemble=" + a.ensemble +
                                  " seed=" + std::to_string(a.seed)))
        body << "# " << line << '\n';
    expander::save(m, body);
    write_output(a.out, body.str());
    std::cerr << "generated " << a.n << "x" << a.N << " " << a.ensemble
              << " matrix, d=" << a.d << "\n";
    return kExitOk;
}

struct BoundArgs {
    double s = 0;
    uint32_t d = 0, n = 0;
    std::optional<double> a_s;
    std::optional<double> eps;
    std::string out;
};

int run_bound(const BoundArgs& a) {
    expander::TailBoundResult r;
    if (a.eps)
        r = expander::rip1_failure_bound(a.s, a.d, a.n, *a.eps);
    else
        r = expander::tail_bound(a.s, a.d, a.n, *a.a_s);

    const char* tag = r.profile.constrained ? "constrained" : "expected";
    const double requested = a.eps ? (1.0 - *a.eps) * a.d * a.s : *a.a_s;
    std::cout << "case=" << tag << " s=" << fmt17(a.s) << " d=" << a.d << " n=" << a.n
              << " a_s=" << fmt17(requested) << " profile_top=" << fmt17(r.profile.top())
              << " psi=" << fmt17(r.psi)
              << " log_bound=" << fmt17(r.log_bound) << " nats";
    if (r.log_bound > 0) std::cout << " (vacuous: bound exceeds 1)";
    std::cout << "\nprofile:";
    for (const auto& level : r.profile.levels)
        std::cout << " (" << fmt17(level.index) << ", " << fmt17(level.value) << ")";
    std::cout << "\n";

    if (!a.out.empty()) {
        std::string params = "s=" + fmt17(a.s) + " d=" + std::to_string(a.d) +
                             " n=" + std::to_string(a.n);
        if (a.eps) params += " eps=" + fmt17(*a.eps);
        if (a.a_s) params += " a_s=" + fmt17(*a.a_s);
        params += std::string(" case=") + tag + " psi=" + fmt17(r.psi) +
                  " log_bound=" + fmt17(r.log_bound);
        std::string csv;
        for (const auto& line : manifest("bound", params)) csv += "# " + line + "\n";
        csv += "index,a\n";
        for (const auto& level : r.profile.levels)
            csv += fmt17(level.index) + "," + fmt17(level.value) + "\n";
        write_output(a.out, csv);
    }
    return kExitOk;
}

struct PhaseArgs {
    uint32_t d = 8;
    double eps = 1.0 / 6.0;
    uint32_t n = 1024;
    std::string grid = "0.05:0.95:25";
    std::string out;
    int threads = -1;
};

int run_phase(const PhaseArgs& a) {
    const auto grid = parse_linear_grid(a.grid);
    const int threads = a.threads >= 0 ? a.threads : default_threads();
    const auto curve = expander::sweep(grid, a.d, a.eps, a.n, threads);

    const auto lines = manifest(
        "phase", "d=" + std::to_string(a.d) + " eps=" + fmt17(a.eps) +
                     " n=" + std::to_string(a.n) + " grid=" + a.grid);
    write_output(a.out, expander::curve_to_csv(curve, lines));

    const size_t bad = curve.failed_points();
    if (bad > 0) {
        std::cerr << bad << "/" << grid.size() << " grid points failed:\n";
        for (size_t i = 0; i < grid.size(); ++i)
            if (!curve.errors[i].empty())
                std::cerr << "  delta=" << fmt17(grid[i]) << ": " << curve.errors[i]
                          << "\n";
        return kExitNumerical;
    }
    std::cerr << "all " << grid.size() << " grid points converged\n";
    return kExitOk;
}

struct SimulateArgs {
    uint32_t n = 1024, d = 8;
    std::string ensemble = "SE";
    std::string k_grid;  // empty -> default grid
    uint32_t trials = 500;
    uint64_t seed = 5;
    std::string mode = "summary";  // raw | summary | tail
    uint32_t s = 0;
    double a_s = 0;
    std::string out;
    int threads = -1;
};

int run_simulate(const SimulateArgs& a) {
    const int threads = a.threads >= 0 ? a.threads : default_threads();

    if (a.mode == "tail") {
        if (a.s == 0) throw expander::DomainError("tail mode requires --s");
        const auto est =
            expander::empirical_tail(a.n, a.d, a.s, a.a_s, a.trials, a.seed, threads);
        std::string csv;
        for (const auto& line :
             manifest("simulate",
                      "mode=tail n=" + std::to_string(a.n) + " d=" + std::to_string(a.d) +
                          " s=" + std::to_string(a.s) + " a_s=" + fmt17(a.a_s) +
                          " trials=" + std::to_string(a.trials) +
                          " seed=" + std::to_string(a.seed)))
            csv += "# " + line + "\n";
        csv += "s,a_s,threshold,hits,trials,frequency,radius\n";
        csv += std::to_string(a.s) + "," + fmt17(a.a_s) + "," +
               fmt17(std::floor(a.a_s)) + "," + std::to_string(est.hits) + "," +
               std::to_string(est.trials) + "," + fmt17(est.frequency) + "," +
               fmt17(est.radius) + "\n";
        write_output(a.out, csv);
        std::cerr << "tail frequency " << fmt17(est.frequency) << " +/- "
                  << fmt17(est.radius) << " (" << est.hits << "/" << est.trials
                  << " trials)\n";
        return kExitOk;
    }
    if (a.mode != "raw" && a.mode != "summary")
        throw expander::DomainError("unknown mode '" + a.mode + "'");

    expander::SimulationConfig config;
    config.n = a.n;
    config.d = a.d;
    config.ensemble = expander::ensemble_from_string(a.ensemble);
    config.k_grid = a.k_grid.empty() ? expander::default_k_grid(a.n)
                                     : parse_k_list(a.k_grid);
    config.trials = a.trials;
    config.seed = a.seed;

    const auto result = expander::simulate_cardinalities(config, threads);

    std::string grid_echo;
    for (size_t i = 0; i < config.k_grid.size(); ++i) {
        if (i) grid_echo += ',';
        grid_echo += std::to_string(config.k_grid[i]);
    }
    const auto lines = manifest(
        "simulate", "mode=" + a.mode + " n=" + std::to_string(a.n) +
                        " d=" + std::to_string(a.d) + " ensemble=" + a.ensemble +
                        " trials=" + std::to_string(a.trials) +
                        " seed=" + std::to_string(a.seed) + " k_grid=" + grid_echo);
    write_output(a.out, a.mode == "raw"
                            ? expander::simulation_to_csv_raw(result, lines)
                            : expander::simulation_to_csv_summary(result, lines));

    double max_rel = 0;
    for (const auto& summary : result.per_k) max_rel = std::max(max_rel, summary.rel_error);
    std::cerr << "simulated " << config.k_grid.size() << " set sizes x " << a.trials
              << " trials; max relative error " << fmt17(max_rel) << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string in;
    uint32_t k = 2;
    double eps = 0.25;
};

int run_verify(const VerifyArgs& a) {
    std::ifstream in(a.in);
    if (!in) throw expander::DomainError("cannot open matrix file: " + a.in);
    const auto m = expander::load(in);
    const auto verdict = expander::verify_expander_exhaustive(m, a.k, a.eps);

    std::cout << (verdict.pass ? "PASS" : "FAIL") << ": checked "
              << verdict.sets_checked << " sets of size <= " << a.k
              << "; minimum expansion " << fmt17(verdict.worst_expansion)
              << " (threshold " << fmt17(1.0 - a.eps) << ") at set {";
    for (size_t i = 0; i < verdict.worst_set.size(); ++i)
        std::cout << (i ? " " : "") << verdict.worst_set[i];
    std::cout << "} with |Gamma| = " << verdict.worst_neighbors << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse expander matrices: generation, tail bounds, phase transitions"};
    app.set_version_flag("--version", expander::kVersion);
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "draw an SE/SSE matrix and save it");
    cmd_gen->add_option("--n", gen.n, "rows")->required();
    cmd_gen->add_option("--N", gen.N, "columns")->required();
    cmd_gen->add_option("--d", gen.d, "nonzeros per column")->required();
    cmd_gen->add_option("--ensemble", gen.ensemble, "SE or SSE");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("--out", gen.out, "output path (stdout if omitted)");
    cmd_gen->add_option("--threads", gen.threads, "worker threads (0 = all cores)");

    BoundArgs bound;
    auto* cmd_bound = app.add_subcommand("bound", "evaluate the tail bound");
    cmd_bound->add_option("--s", bound.s, "set size")->required();
    cmd_bound->add_option("--d", bound.d, "degree")->required();
    cmd_bound->add_option("--n", bound.n, "rows")->required();
    auto* opt_as = cmd_bound->add_option("--a-s", bound.a_s, "target cardinality a_s");
    auto* opt_eps = cmd_bound->add_option("--eps", bound.eps,
                                          "expansion slack (uses a_s = (1-eps) d s)");
    opt_as->excludes(opt_eps);
    cmd_bound->add_option("--out", bound.out, "optional profile CSV path");

    PhaseArgs phase;
    auto* cmd_phase = app.add_subcommand("phase", "phase-transition sweep");
    cmd_phase->add_option("--d", phase.d, "degree (default 8)");
    cmd_phase->add_option("--eps", phase.eps, "expansion slack (default 1/6)");
    cmd_phase->add_option("--n", phase.n, "working rows (default 1024)");
    cmd_phase->add_option("--grid", phase.grid, "delta grid start:stop:count");
    cmd_phase->add_option("--out", phase.out, "output CSV path (stdout if omitted)");
    cmd_phase->add_option("--threads", phase.threads, "worker threads (0 = all cores)");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo cardinality/tail runs");
    cmd_sim->add_option("--n", sim.n, "rows (default 1024)");
    cmd_sim->add_option("--d", sim.d, "degree (default 8)");
    cmd_sim->add_option("--ensemble", sim.ensemble, "SE or SSE");
    cmd_sim->add_option("--k-grid", sim.k_grid, "comma list of set sizes (default grid)");
    cmd_sim->add_option("--trials", sim.trials, "trials per set size (default 500)");
    cmd_sim->add_option("--seed", sim.seed, "master seed (default 5)");
    cmd_sim->add_option("--mode", sim.mode, "raw | summary | tail");
    cmd_sim->add_option("--s", sim.s, "set size (tail mode)");
    cmd_sim->add_option("--a-s", sim.a_s, "cardinality threshold (tail mode)");
    cmd_sim->add_option("--out", sim.out, "output CSV path (stdout if omitted)");
    cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = all cores)");

    VerifyArgs verify;
    auto* cmd_verify = app.add_subcommand("verify", "exhaustive expander verification");
    cmd_verify->add_option("--in", verify.in, "matrix file")->required();
    cmd_verify->add_option("--k", verify.k, "max set size (default 2)");
    cmd_verify->add_option("--eps", verify.eps, "expansion slack (default 1/4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = kExitOk;
    try {
        if (app.got_subcommand(cmd_gen)) {
            rc = run_generate(gen);
        } else if (app.got_subcommand(cmd_bound)) {
            if (opt_as->count() + opt_eps->count() != 1) {
                std::cerr << "bound: supply exactly one of --a-s / --eps\n";
                return kExitUsage;
            }
            rc = run_bound(bound);
        } else if (app.got_subcommand(cmd_phase)) {
            rc = run_phase(phase);
        } else if (app.got_subcommand(cmd_sim)) {
            rc = run_simulate(sim);
        } else if (app.got_subcommand(cmd_verify)) {
            rc = run_verify(verify);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const expander::NoTransitionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const expander::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const expander::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const expander::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }

    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "completed in "
              << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    return rc;
}
