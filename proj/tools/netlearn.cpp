#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "netlearn/epoch_time.hpp"
#include "netlearn/io.hpp"
#include "netlearn/kernels.hpp"
#include "netlearn/learning.hpp"
#include "netlearn/optimize.hpp"
#include "netlearn/rng.hpp"
#include "netlearn/simulate.hpp"

namespace fs = std::filesystem;
using namespace netlearn;

namespace {

constexpr int kFeasible = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;
constexpr int kValidationFailure = 3;

struct ProfileSource {
    std::string profile_path;
    std::string observations_path;
    std::optional<double> eps_max;
    std::optional<double> t_max;

    void attach(CLI::App* cmd) {
        auto* p = cmd->add_option("--profile", profile_path, "profile JSON with c1, c2, c3, eps_max, t_max");
        auto* o = cmd->add_option("--observations", observations_path, "X,K,gamma,error CSV to fit the profile from");
        p->excludes(o);
        o->excludes(p);
        cmd->add_option("--eps-max", eps_max, "target error, overrides the profile");
        cmd->add_option("--t-max", t_max, "deadline, overrides the profile");
    }

    LearningProfile load() const {
        LearningProfile p;
        if (!profile_path.empty()) {
            p = io::parse_profile(io::read_file(profile_path), profile_path);
        } else if (!observations_path.empty()) {
            const auto obs = io::parse_observations(io::read_file(observations_path), observations_path);
            const auto f = fit_profile(obs);
            p.c1 = f.c1;
            p.c2 = f.c2;
            p.c3 = f.c3;
        } else {
            throw std::invalid_argument("one of --profile or --observations is required");
        }
        if (eps_max) p.eps_max = *eps_max;
        if (t_max) p.t_max = *t_max;
        validate_profile(p);
        return p;
    }
};

struct Common {
    std::string instance;
    double rate_multiplier = 1.0;
    std::size_t resolution = kDefaultResolution;
    std::string out = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--instance", instance, "instance JSON")->required();
        cmd->add_option("--rate-multiplier", rate_multiplier, "scale every i-node rate (5 for the rich scenario)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--resolution", resolution, "grid points of the time engine")->check(CLI::Range(64, 1 << 24));
        cmd->add_option("--out", out, "output directory");
    }

    Topology load() const {
        auto t = io::load_instance(instance);
        for (auto& n : t.i_nodes) n.rate *= rate_multiplier;
        return t;
    }

    std::string path(const std::string& name) const {
        fs::create_directories(out);
        return (fs::path(out) / name).string();
    }
};

void report_infeasible(const LearningProfile& p) {
    if (p.eps_max <= p.c1) std::cerr << "infeasible: error floor (eps_max <= c1)\n";
    else std::cerr << "infeasible: no explored selection meets both constraints\n";
}

OptimizeResult run_algorithm(const std::string& name, const Topology& t, const LearningProfile& p,
                             const OptimizeOptions& opt, std::uint64_t seed, double brute_limit) {
    if (name == "double-climb") return double_climb(t, p, opt);
    if (name == "opt-unif") return opt_unif(t, p, opt);
    if (name == "ga") return genetic(t, p, GaParams{}, seed, opt);
    if (name == "brute-force") return brute_force(t, p, BruteForceLimits{brute_limit}, opt);
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

// Evaluation of the last explored selection, used to report why nothing was feasible.
EvaluationResult last_explored(const Topology& t, const LearningProfile& p, const OptimizeOptions& opt) {
    auto degrees = uniform_degrees(t.l_nodes.size());
    for (auto d = degrees.rbegin(); d != degrees.rend(); ++d)
        if (auto ll = cheapest_uniform(t, *d)) return evaluate(t, *ll, {}, p, opt.eval);
    return evaluate(t, {}, {}, p, opt.eval);
}

int cmd_optimize(const Common& c, const ProfileSource& ps, const std::string& algorithm, std::uint64_t seed,
                 bool no_stop, double brute_limit) {
    const auto t = c.load();
    const auto p = ps.load();
    OptimizeOptions opt;
    opt.eval.engine.resolution = c.resolution;
    opt.stop_rule = !no_stop;
    const auto r = run_algorithm(algorithm, t, p, opt, seed, brute_limit);
    io::SolutionRecord rec{algorithm, r.best, r.best ? r.best->result : last_explored(t, p, opt)};
    io::write_file(c.path("solution.json"), io::emit_solution(t, rec));
    io::write_file(c.path("trace.csv"), io::trace_csv(r.trace));
    if (!r.feasible()) {
        report_infeasible(p);
        return kInfeasible;
    }
    std::printf("%s: cost %s, K %ld, d_L %d, %zu i-l edges\n", algorithm.c_str(),
                io::format_number(r.best->result.cost).c_str(), r.best->result.epochs, r.best->d_L,
                r.best->selection.il_edges.size());
    return kFeasible;
}

double z_score(double analytic, double mean, double se) {
    const double diff = mean - analytic;
    if (se > 0.0) return diff / se;
    return std::abs(diff) <= 1e-9 * std::max(1.0, std::abs(analytic)) ? 0.0 : INFINITY;
}

int cmd_simulate(const Common& c, const std::string& solution, long reps, std::uint64_t seed, bool shared) {
    if (reps < kMinReplications)
        throw std::invalid_argument("--reps must be at least " + std::to_string(kMinReplications));
    const auto t = c.load();
    const auto s = io::parse_solution(t, io::read_file(solution), solution);
    SimOptions so{shared};
    const auto stats = monte_carlo(t, s, reps, seed, so);
    const auto one = run_replication(t, s, seed, 0, so, true);
    io::write_file(c.path("gantt.csv"), io::gantt_csv(one.events));
    io::write_file(c.path("simstats.json"), io::emit_simstats(stats));

    EngineOptions eng;
    eng.resolution = c.resolution;
    std::string csv = "epoch,analytic,mc_mean,mc_stderr,z\n";
    double worst = 0.0;
    double analytic_total = 0.0;
    for (long k = 1; k <= s.epochs; ++k) {
        const double a = expectation(epoch_duration_pdf(t, s, k, eng));
        analytic_total += a;
        const auto j = static_cast<std::size_t>(k - 1);
        const double z = z_score(a, stats.epoch_mean[j], stats.epoch_stderr[j]);
        worst = std::max(worst, std::abs(z));
        csv += std::to_string(k) + "," + io::format_number(a) + "," + io::format_number(stats.epoch_mean[j]) + "," +
               io::format_number(stats.epoch_stderr[j]) + "," + io::format_number(z) + "\n";
    }
    const double zt = z_score(analytic_total, stats.total_mean, stats.total_stderr);
    worst = std::max(worst, std::abs(zt));
    csv += "total," + io::format_number(analytic_total) + "," + io::format_number(stats.total_mean) + "," +
           io::format_number(stats.total_stderr) + "," + io::format_number(zt) + "\n";
    io::write_file(c.path("comparison.csv"), csv);
    std::printf("mean total %s (stderr %s), analytic %s\n", io::format_number(stats.total_mean).c_str(),
                io::format_number(stats.total_stderr).c_str(), io::format_number(analytic_total).c_str());
    if (worst > 5.0) {
        std::cerr << "validation failure: analytic and simulated means differ by " << io::format_number(worst)
                  << " standard errors\n";
        return kValidationFailure;
    }
    return kFeasible;
}

int cmd_fit(const std::string& observations, const std::string& out, std::optional<double> eps_max,
            std::optional<double> t_max) {
    const auto obs = io::parse_observations(io::read_file(observations), observations);
    const auto f = fit_profile(obs);
    LearningProfile p{f.c1, f.c2, f.c3};
    if (eps_max) p.eps_max = *eps_max;
    if (t_max) p.t_max = *t_max;
    const auto text = io::emit_profile(p, f.mse);
    if (out.empty()) std::cout << text;
    else io::write_file(out, text);
    return kFeasible;
}

struct GenParams {
    std::size_t l_nodes = 10;
    std::size_t i_nodes = 20;
    std::size_t links_per_i = 1;
    double x0 = 100.0;
    bool rich = false;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen_instance(const GenParams& g) {
    if (g.l_nodes < 1) throw std::invalid_argument("--l-nodes must be at least 1");
    if (g.links_per_i > g.l_nodes) throw std::invalid_argument("--links-per-i cannot exceed --l-nodes");
    PortableRng rng(g.seed);
    Topology t;
    for (std::size_t l = 0; l < g.l_nodes; ++l)
        t.l_nodes.push_back({"L" + std::to_string(l + 1), 0.0, Exponential{1.0}, g.x0});
    for (std::size_t i = 0; i < g.i_nodes; ++i) {
        const double rate = rng.uniform(10.0, 100.0);
        t.i_nodes.push_back({"I" + std::to_string(i + 1), 0.0, Exponential{1.0}, g.rich ? 5.0 * rate : rate});
    }
    for (std::size_t a = 0; a < g.l_nodes; ++a)
        for (std::size_t b = a + 1; b < g.l_nodes; ++b) t.ll_candidates.push_back({a, b, rng.uniform()});
    for (std::size_t i = 0; i < g.i_nodes; ++i) {
        // distinct l-nodes by a partial shuffle
        std::vector<std::size_t> ls(g.l_nodes);
        for (std::size_t l = 0; l < ls.size(); ++l) ls[l] = l;
        for (std::size_t j = 0; j < g.links_per_i; ++j) {
            std::swap(ls[j], ls[j + rng.below(ls.size() - j)]);
            t.il_candidates.push_back({i, ls[j], rng.uniform()});
        }
    }
    validate_topology(t);
    const auto text = io::emit_instance(t);
    if (g.out.empty()) std::cout << text;
    else io::write_file(g.out, text);
    return kFeasible;
}

int cmd_compare(const Common& c, const ProfileSource& ps, std::uint64_t seed, bool with_brute, double brute_limit) {
    const auto t = c.load();
    const auto p = ps.load();
    OptimizeOptions opt;
    opt.eval.engine.resolution = c.resolution;
    std::vector<std::string> algos{"double-climb", "opt-unif", "ga"};
    if (with_brute) algos.push_back("brute-force");
    std::string csv = "algorithm,feasible,cost,d_L_normalized,il_fraction,extra_samples_per_epoch\n";
    bool any = false;
    for (const auto& a : algos) {
        const auto r = run_algorithm(a, t, p, opt, seed, brute_limit);
        if (!r.feasible()) {
            csv += a + ",0,nan,nan,nan,nan\n";
            continue;
        }
        any = true;
        const auto& s = *r.best;
        double extra = 0.0;
        for (auto e : s.selection.il_edges) extra += t.i_nodes[t.il_candidates[e].i].rate;
        const double denom_l = t.l_nodes.size() > 1 ? static_cast<double>(t.l_nodes.size() - 1) : 1.0;
        const double il_frac = t.il_candidates.empty()
                                   ? 0.0
                                   : static_cast<double>(s.selection.il_edges.size()) /
                                         static_cast<double>(t.il_candidates.size());
        csv += a + ",1," + io::format_number(s.result.cost) + "," + io::format_number(s.d_L / denom_l) + "," +
               io::format_number(il_frac) + "," + io::format_number(extra) + "\n";
    }
    io::write_file(c.path("compare.csv"), csv);
    if (!any) {
        report_infeasible(p);
        return kInfeasible;
    }
    return kFeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-minimal topology and epoch selection for distributed learning"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "thread cap")->envname("NETLEARN_THREADS")->check(CLI::NonNegativeNumber);

    Common oc;
    ProfileSource ops;
    std::string algorithm = "double-climb";
    std::uint64_t seed = 1;
    bool no_stop = false;
    double brute_limit = BruteForceLimits{}.max_states;
    auto* opt_cmd = app.add_subcommand("optimize", "select edges and epochs; writes solution.json and trace.csv");
    oc.attach(opt_cmd);
    ops.attach(opt_cmd);
    opt_cmd->add_option("--algorithm", algorithm)
        ->check(CLI::IsMember({"double-climb", "opt-unif", "ga", "brute-force"}));
    opt_cmd->add_option("--seed", seed);
    opt_cmd->add_flag("--no-stop-rule", no_stop, "disable the early exit of double-climb");
    opt_cmd->add_option("--brute-force-limit", brute_limit, "maximum states brute force may enumerate");

    Common sc;
    std::string solution;
    long reps = 10000;
    std::uint64_t sim_seed = 1;
    bool shared = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of a solution; writes gantt.csv, simstats.json, "
                                                   "comparison.csv");
    sc.attach(sim_cmd);
    sim_cmd->add_option("--solution", solution)->required();
    sim_cmd->add_option("--reps", reps);
    sim_cmd->add_option("--seed", sim_seed);
    sim_cmd->add_flag("--shared-draw", shared, "one delivery draw per i-node and epoch");

    std::string obs_path;
    std::string fit_out;
    std::optional<double> fit_eps;
    std::optional<double> fit_tmax;
    auto* fit_cmd = app.add_subcommand("fit", "fit c1, c2, c3 from X,K,gamma,error observations");
    fit_cmd->add_option("--observations", obs_path)->required();
    fit_cmd->add_option("--out", fit_out, "profile JSON (stdout when omitted)");
    fit_cmd->add_option("--eps-max", fit_eps);
    fit_cmd->add_option("--t-max", fit_tmax);

    GenParams gp;
    auto* gen_cmd = app.add_subcommand("gen-instance", "random instance: U(0,1) costs, U(10,100) rates, Exp(1) times");
    gen_cmd->add_option("--l-nodes", gp.l_nodes);
    gen_cmd->add_option("--i-nodes", gp.i_nodes);
    gen_cmd->add_option("--links-per-i", gp.links_per_i, "candidate l-nodes per i-node");
    gen_cmd->add_option("--x0", gp.x0, "offline samples per l-node")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--rich", gp.rich, "multiply every rate by 5");
    gen_cmd->add_option("--seed", gp.seed);
    gen_cmd->add_option("--out", gp.out, "instance JSON (stdout when omitted)");

    Common cc;
    ProfileSource cps;
    std::uint64_t cmp_seed = 1;
    bool with_brute = false;
    double cmp_limit = BruteForceLimits{}.max_states;
    auto* cmp_cmd = app.add_subcommand("compare", "run every algorithm on one instance; writes compare.csv");
    cc.attach(cmp_cmd);
    cps.attach(cmp_cmd);
    cmp_cmd->add_option("--seed", cmp_seed);
    cmp_cmd->add_flag("--brute-force", with_brute);
    cmp_cmd->add_option("--brute-force-limit", cmp_limit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (threads > 0) kernels::set_thread_budget(threads);
        if (*opt_cmd) return cmd_optimize(oc, ops, algorithm, seed, no_stop, brute_limit);
        if (*sim_cmd) return cmd_simulate(sc, solution, reps, sim_seed, shared);
        if (*fit_cmd) return cmd_fit(obs_path, fit_out, fit_eps, fit_tmax);
        if (*gen_cmd) return cmd_gen_instance(gp);
        if (*cmp_cmd) return cmd_compare(cc, cps, cmp_seed, with_brute, cmp_limit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
