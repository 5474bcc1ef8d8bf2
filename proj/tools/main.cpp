// Command-line front end. Thin adapters only: every numeric path goes
// through the library.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config_file.hpp"
#include "hawkes/edgeworth.hpp"
#include "hawkes/experiment.hpp"
#include "hawkes/io.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/simulate.hpp"

namespace {

using namespace hawkes;

std::size_t default_workers() {
    if (const char* env = std::getenv("HAWKES_EDGEWORTH_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 0;  // library picks hardware concurrency
}

std::string fit_to_json(const MleFit& f) {
    JsonWriter w;
    w.begin_object();
    w.key("theta_hat").begin_object();
    w.key("mu").value(f.theta_hat.mu);
    w.key("alpha").value(f.theta_hat.alpha);
    w.key("beta").value(f.theta_hat.beta);
    w.end_object();
    w.key("converged").value(f.converged);
    w.key("iterations").value(static_cast<std::int64_t>(f.iterations));
    w.key("final_grad_norm").value(f.final_grad_norm);
    w.key("boundary_hit").value(f.boundary_hit);
    w.key("branching_ge_one").value(f.branching_ge_one);
    w.key("log_likelihood").value(f.log_likelihood);
    w.end_object();
    return w.str() + "\n";
}

void write_density_curves(const EdgeworthCoefficients& coeffs, const std::string& out_dir,
                          std::size_t grid_points, double span_sds) {
    std::filesystem::create_directories(out_dir);
    for (int a = 0; a < 3; ++a) {
        const double sd = std::sqrt(coeffs.g_inv[a][a]);
        std::string csv = "z,normal,qt3\n";
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double z = -span_sds * sd +
                             2.0 * span_sds * sd * static_cast<double>(i) /
                                 static_cast<double>(grid_points - 1);
            csv += format_g17(z);
            csv += ',';
            csv += format_g17(normal_marginal(a, z, coeffs));
            csv += ',';
            csv += format_g17(q_t3_marginal(a, z, coeffs));
            csv += '\n';
        }
        write_text_file(out_dir + "/density_" + kParamNames[a] + ".csv", csv);
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Exponential Hawkes processes: simulation, maximum likelihood, and a "
                 "second-order (Edgeworth) approximation to the MLE distribution"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "Simulate one path and write an events CSV");
    double s_mu = 0.5, s_alpha = 1.0, s_beta = 1.3, s_t = 30.0;
    std::uint64_t s_seed = 1;
    std::string s_out = "events.csv";
    sim->add_option("--mu", s_mu, "Baseline intensity");
    sim->add_option("--alpha", s_alpha, "Intensity jump per event");
    sim->add_option("--beta", s_beta, "Exponential decay rate");
    sim->add_option("--t", s_t, "Horizon");
    sim->add_option("--seed", s_seed, "RNG seed");
    sim->add_option("--out", s_out, "Output CSV path (sidecar descriptor: <out>.json)");

    // --- fit ---
    auto* fit_cmd = app.add_subcommand("fit", "Fit the MLE to an events CSV, print JSON");
    std::string f_in;
    std::optional<double> f_t;
    std::optional<double> f_mu0, f_alpha0, f_beta0;
    fit_cmd->add_option("--in", f_in, "Events CSV (horizon read from <in>.json unless --t)")
        ->required();
    fit_cmd->add_option("--t", f_t, "Horizon override");
    fit_cmd->add_option("--mu0", f_mu0, "Initial mu");
    fit_cmd->add_option("--alpha0", f_alpha0, "Initial alpha");
    fit_cmd->add_option("--beta0", f_beta0, "Initial beta");

    // --- coeffs ---
    auto* co = app.add_subcommand("coeffs", "Monte-Carlo expansion coefficients, write JSON");
    double c_mu = 0.5, c_alpha = 1.0, c_beta = 1.3, c_t = 30.0;
    std::uint64_t c_seed = 1, c_mc = 5000;
    std::optional<std::uint64_t> c_workers;
    std::string c_out = "coeffs.json";
    std::string c_config;
    co->add_option("--mu", c_mu, "True mu");
    co->add_option("--alpha", c_alpha, "True alpha");
    co->add_option("--beta", c_beta, "True beta");
    co->add_option("--t", c_t, "Horizon");
    co->add_option("--seed", c_seed, "Master seed");
    co->add_option("--mc", c_mc, "Number of Monte-Carlo paths");
    co->add_option("--workers", c_workers, "Worker threads");
    co->add_option("--out", c_out, "Output JSON path");
    co->add_option("--config", c_config, "Config file (TOML or JSON)");

    // --- density ---
    auto* de = app.add_subcommand("density", "Evaluate marginals of the expansion density");
    std::string d_coeffs = "coeffs.json", d_out = ".";
    std::uint64_t d_grid = 512;
    double d_span = 6.0;
    de->add_option("--coeffs", d_coeffs, "coeffs.json produced by `coeffs` or `experiment`");
    de->add_option("--out", d_out, "Output directory for density_<param>.csv");
    de->add_option("--grid", d_grid, "Grid points per marginal");
    de->add_option("--span", d_span, "Half-width of the grid in marginal SDs");

    // --- experiment ---
    auto* ex = app.add_subcommand("experiment", "Full pipeline: coefficients, MLE replications, "
                                                "density and Q-Q datasets");
    std::string e_config;
    std::optional<double> e_mu, e_alpha, e_beta, e_t;
    std::optional<std::uint64_t> e_seed, e_mc, e_reps, e_workers, e_grid;
    std::optional<std::string> e_out;
    ex->add_option("--config", e_config, "Config file (TOML or JSON)");
    ex->add_option("--mu", e_mu, "True mu");
    ex->add_option("--alpha", e_alpha, "True alpha");
    ex->add_option("--beta", e_beta, "True beta");
    ex->add_option("--t", e_t, "Horizon");
    ex->add_option("--seed", e_seed, "Master seed");
    ex->add_option("--mc", e_mc, "Coefficient-estimation paths");
    ex->add_option("--reps", e_reps, "MLE replications");
    ex->add_option("--workers", e_workers, "Worker threads");
    ex->add_option("--grid", e_grid, "Density grid points");
    ex->add_option("--out", e_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1; help/version exit 0
    }

    if (sim->parsed()) {
        const Theta theta{s_mu, s_alpha, s_beta};
        const EventSequence ev = simulate(theta, s_t, s_seed);
        write_events_csv(s_out, ev);
        EventsDescriptor desc;
        desc.horizon = s_t;
        desc.theta = theta;
        desc.seed = s_seed;
        write_events_descriptor(sidecar_path(s_out), desc);
        std::cout << "wrote " << ev.size() << " events to " << s_out << "\n";
        return 0;
    }

    if (fit_cmd->parsed()) {
        const std::vector<double> times = read_events_csv(f_in);
        double horizon = 0.0;
        Theta init_from_file{};
        bool have_init = false;
        if (f_t) {
            horizon = *f_t;
        } else {
            const EventsDescriptor desc = read_events_descriptor(sidecar_path(f_in));
            horizon = desc.horizon;
            init_from_file = desc.theta;
            have_init = init_from_file.is_valid();
        }
        const EventSequence ev = make_events(times, horizon);
        MleFit result;
        if (f_mu0 || f_alpha0 || f_beta0) {
            Theta init = have_init ? init_from_file : Theta{0.5, 0.5, 1.0};
            if (f_mu0) init.mu = *f_mu0;
            if (f_alpha0) init.alpha = *f_alpha0;
            if (f_beta0) init.beta = *f_beta0;
            result = fit(ev, init);
        } else {
            result = fit(ev);
        }
        std::cout << fit_to_json(result);
        return result.converged ? 0 : 2;  // non-convergence is a numerical failure
    }

    if (co->parsed()) {
        if (!c_config.empty()) {
            const cli::FileConfig fc = cli::load_config_file(c_config);
            if (fc.mu && !co->count("--mu")) c_mu = *fc.mu;
            if (fc.alpha && !co->count("--alpha")) c_alpha = *fc.alpha;
            if (fc.beta && !co->count("--beta")) c_beta = *fc.beta;
            if (fc.t && !co->count("--t")) c_t = *fc.t;
            if (fc.seed && !co->count("--seed")) c_seed = *fc.seed;
            if (fc.mc && !co->count("--mc")) c_mc = *fc.mc;
            if (fc.workers && !co->count("--workers")) c_workers = *fc.workers;
            if (fc.out && !co->count("--out")) c_out = *fc.out;
        }
        const std::size_t workers = c_workers ? static_cast<std::size_t>(*c_workers)
                                              : default_workers();
        const EdgeworthCoefficients coeffs =
            estimate_coefficients_mc(Theta{c_mu, c_alpha, c_beta}, c_t,
                                     static_cast<std::size_t>(c_mc), c_seed, workers);
        write_text_file(c_out, coefficients_to_json(coeffs));
        std::cout << "wrote " << c_out << "\n";
        return 0;
    }

    if (de->parsed()) {
        if (d_grid < 2) throw CLI::ValidationError("--grid must be at least 2");
        const EdgeworthCoefficients coeffs = coefficients_from_json(read_text_file(d_coeffs));
        write_density_curves(coeffs, d_out, static_cast<std::size_t>(d_grid), d_span);
        std::cout << "wrote density curves to " << d_out << "\n";
        return 0;
    }

    // experiment
    ExperimentConfig config;
    config.workers = default_workers();
    if (!e_config.empty()) {
        const cli::FileConfig fc = cli::load_config_file(e_config);
        if (fc.mu) config.theta0.mu = *fc.mu;
        if (fc.alpha) config.theta0.alpha = *fc.alpha;
        if (fc.beta) config.theta0.beta = *fc.beta;
        if (fc.t) config.t_horizon = *fc.t;
        if (fc.seed) config.master_seed = *fc.seed;
        if (fc.mc) config.mc_coeff = static_cast<std::size_t>(*fc.mc);
        if (fc.reps) config.n_rep_mle = static_cast<std::size_t>(*fc.reps);
        if (fc.workers) config.workers = static_cast<std::size_t>(*fc.workers);
        if (fc.grid) config.grid_points = static_cast<std::size_t>(*fc.grid);
        if (fc.out) config.output_dir = *fc.out;
    }
    if (e_mu) config.theta0.mu = *e_mu;
    if (e_alpha) config.theta0.alpha = *e_alpha;
    if (e_beta) config.theta0.beta = *e_beta;
    if (e_t) config.t_horizon = *e_t;
    if (e_seed) config.master_seed = *e_seed;
    if (e_mc) config.mc_coeff = static_cast<std::size_t>(*e_mc);
    if (e_reps) config.n_rep_mle = static_cast<std::size_t>(*e_reps);
    if (e_workers) config.workers = static_cast<std::size_t>(*e_workers);
    if (e_grid) config.grid_points = static_cast<std::size_t>(*e_grid);
    if (e_out) config.output_dir = *e_out;
    if (config.output_dir.empty())
        throw CLI::ValidationError("experiment requires --out (or `out` in the config file)");

    const ExperimentResult result = run(config);
    std::cout << "experiment done: " << result.diagnostics.n_retained << " of "
              << result.diagnostics.n_attempted << " fits retained; outputs in "
              << config.output_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const degenerate_likelihood_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const degenerate_information_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fit_failure_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
