// ampsamp: sampling measurement outcomes of n-qubit states from amplitude
// evaluations. Subcommands: sample-circuit, sample-ground, sample-mbqc,
// budget, verify, distribution.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "ampsamp/verify.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool force = false;
    bool as_json = false;
    int threads = 1;
    std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "RNG seed (fallback: AMPSAMPLE_SEED, then 0)")
        ->each([&c](const std::string&) { c.seed_given = true; });
    cmd->add_flag("--force", c.force, "override size guards (may be slow or exhaust memory)");
    cmd->add_flag("--json", c.as_json, "emit a JSON document instead of plain text");
    cmd->add_option("--threads", c.threads, "worker threads across shots/chains only")
        ->check(CLI::PositiveNumber);
    cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
}

std::uint64_t resolve_seed(const CommonOpts& c) {
    if (c.seed_given) return c.seed;
    if (const char* env = std::getenv("AMPSAMPLE_SEED")) return std::stoull(env);
    return 0;
}

void emit(const CommonOpts& c, const std::string& text, const json& doc) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) throw ampsamp::guard_error("cannot open output file: " + c.output);
        out = &file;
    }
    if (c.as_json)
        *out << doc.dump(2) << '\n';
    else
        *out << text;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::unique_ptr<ampsamp::AmplitudeOracle> make_oracle(const ampsamp::Circuit& c,
                                                      const std::string& backend, bool force) {
    if (backend == "statevector") return std::make_unique<ampsamp::StatevectorOracle>(c);
    if (backend == "pathsum") return std::make_unique<ampsamp::PathSumOracle>(c);
    if (backend == "stabdecomp") return std::make_unique<ampsamp::StabDecompOracle>(c);
    (void)force;
    throw ampsamp::guard_error("unknown backend: " + backend);
}

int cmd_sample_circuit(const std::string& path, const CommonOpts& common, long long shots,
                       const std::string& algorithm, const std::string& backend,
                       const std::string& noise_path, bool no_shortcuts) {
    ampsamp::Circuit c = ampsamp::parse_circuit_file(path);
    const std::uint64_t seed = resolve_seed(common);

    std::unique_ptr<ampsamp::AmplitudeOracle> proto;
    if (!noise_path.empty()) {
        ampsamp::NoisePlan plan = ampsamp::parse_noise_plan_file(noise_path);
        proto = ampsamp::wrap_noisy_oracle(c, plan, common.force);
    } else {
        proto = make_oracle(c, backend, common.force);
    }

    std::vector<std::string> lines(static_cast<std::size_t>(shots));
    std::vector<std::int64_t> evals(static_cast<std::size_t>(shots), 0);
    std::int64_t diag_skips = 0, perm_applies = 0, resamples = 0;

    if (algorithm == "qubit") {
        // marginal chain rule; single session, sequential
        for (long long i = 0; i < shots; ++i) {
            ampsamp::Rng rng(ampsamp::derive_seed(seed, static_cast<std::uint64_t>(i)));
            lines[static_cast<std::size_t>(i)] =
                ampsamp::qubit_by_qubit_sample(c, *proto, rng).str();
        }
    } else if (algorithm == "gate") {
        std::vector<std::array<std::int64_t, 3>> kinds(
            static_cast<std::size_t>(std::max(1, common.threads)), {0, 0, 0});
        auto worker = [&](int w, ampsamp::AmplitudeOracle* oracle) {
            for (long long i = w; i < shots; i += common.threads) {
                ampsamp::Rng rng(ampsamp::derive_seed(seed, static_cast<std::uint64_t>(i)));
                ampsamp::SampleTrace tr =
                    ampsamp::gate_by_gate_sample(c, *oracle, rng, !no_shortcuts);
                lines[static_cast<std::size_t>(i)] = tr.output.str();
                evals[static_cast<std::size_t>(i)] = tr.total_prob_evals;
                for (auto k : tr.steps) {
                    if (k == ampsamp::StepKind::DiagonalSkip) ++kinds[static_cast<std::size_t>(w)][0];
                    if (k == ampsamp::StepKind::PermutationApply) ++kinds[static_cast<std::size_t>(w)][1];
                    if (k == ampsamp::StepKind::Resample) ++kinds[static_cast<std::size_t>(w)][2];
                }
            }
        };
        std::vector<std::unique_ptr<ampsamp::AmplitudeOracle>> clones;
        std::vector<std::thread> pool;
        for (int w = 1; w < common.threads; ++w) {
            clones.push_back(proto->clone());
            pool.emplace_back(worker, w, clones.back().get());
        }
        worker(0, proto.get());
        for (auto& t : pool) t.join();
        for (const auto& k : kinds) {
            diag_skips += k[0];
            perm_applies += k[1];
            resamples += k[2];
        }
    } else {
        throw ampsamp::guard_error("unknown algorithm: " + algorithm);
    }

    std::int64_t total_evals = 0;
    for (auto e : evals) total_evals += e;

    std::ostringstream os;
    os << "# ampsamp sample-circuit shots=" << shots << " seed=" << seed
       << " algorithm=" << algorithm << " backend=" << (noise_path.empty() ? backend : "noisy")
       << '\n';
    for (const auto& l : lines) os << l << '\n';
    os << "# trace prob_evals=" << total_evals << " diagonal_skips=" << diag_skips
       << " permutation_applies=" << perm_applies << " resamples=" << resamples << '\n';

    json doc = {{"command", "sample-circuit"},
                {"shots", shots},
                {"seed", seed},
                {"algorithm", algorithm},
                {"backend", noise_path.empty() ? backend : "noisy"},
                {"samples", lines},
                {"trace",
                 {{"prob_evals", total_evals},
                  {"diagonal_skips", diag_skips},
                  {"permutation_applies", perm_applies},
                  {"resamples", resamples}}}};
    emit(common, os.str(), doc);
    return 0;
}

int cmd_sample_ground(const std::string& path, const CommonOpts& common, long long chains,
                      long long steps, int k, std::string x_in_str, bool magic, double eps) {
    const std::uint64_t seed = resolve_seed(common);
    std::unique_ptr<ampsamp::GroundStateOracle> oracle;
    ampsamp::SparseHamiltonian h;
    ampsamp::GapBoundReport diag;
    bool have_diag = false;
    int n = 0;

    if (magic) {
        ampsamp::MagicRatioHamiltonian mr = ampsamp::parse_magic_ratio_file(path);
        n = mr.n;
        oracle = std::make_unique<ampsamp::MagicRatioOracle>(mr);
        h = ampsamp::to_hamiltonian(mr);
    } else {
        h = ampsamp::parse_hamiltonian_file(path);
        n = h.n;
    }

    ampsamp::ChainConfig cfg;
    cfg.k = k;
    cfg.steps = steps;
    cfg.eps = eps;
    if (!x_in_str.empty()) {
        cfg.x_in = ampsamp::BitString::parse(x_in_str);
        if (cfg.x_in.n != n) throw ampsamp::guard_error("--x-in length != qubit count");
    }

    if (common.force || n <= ampsamp::kGapCheckMaxQubits) {
        if (x_in_str.empty()) cfg.x_in = ampsamp::BitString(0, n); // placeholder for the check
        diag = ampsamp::gap_bound_check(h, cfg, common.force);
        have_diag = true;
        if (!magic) {
            ampsamp::GroundStateResult gs = ampsamp::exact_ground_state(h, common.force);
            oracle = std::make_unique<ampsamp::ExactDiagOracle>(n, gs.psi);
        }
        if (x_in_str.empty()) { // default start: heaviest support state
            std::size_t best = 0;
            for (std::size_t i = 0; i < diag.pi.size(); ++i)
                if (diag.pi[i] > diag.pi[best]) best = i;
            cfg.x_in = ampsamp::BitString(diag.support[best], n);
        }
    } else if (!magic) {
        throw ampsamp::guard_error(
            "sample-ground: Hamiltonian oracle needs an eigensolve; n exceeds guard "
            "(use --force or a --magic instance)");
    } else if (x_in_str.empty()) {
        cfg.x_in = ampsamp::BitString(0, n);
    }
    if (!oracle->supp_member(cfg.x_in))
        throw ampsamp::guard_error("start state outside the ground-state support");

    std::vector<std::string> lines(static_cast<std::size_t>(chains));
    const int nthreads = std::max(1, common.threads);
    auto worker = [&](int w) {
        for (long long i = w; i < chains; i += nthreads) {
            ampsamp::ChainConfig mine = cfg;
            mine.seed = ampsamp::derive_seed(seed, static_cast<std::uint64_t>(i));
            lines[static_cast<std::size_t>(i)] = ampsamp::run_chain(*oracle, mine).first.str();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "# ampsamp sample-ground chains=" << chains << " steps=" << steps << " k=" << k
       << " seed=" << seed << " x_in=" << cfg.x_in.str() << '\n';
    for (const auto& l : lines) os << l << '\n';
    json jdiag;
    if (have_diag) {
        os << "# diagnostics gamma=" << fmt(diag.gamma) << " s=" << fmt(diag.s)
           << " N=" << diag.big_n << " lambda1=" << fmt(diag.lambda1)
           << " gap_lhs=" << fmt(diag.lhs) << " gap_rhs=" << fmt(diag.rhs)
           << " holds=" << (diag.holds ? 1 : 0) << " mixing_time=" << fmt(diag.mixing_time)
           << " runtime_estimate=" << fmt(diag.runtime_estimate) << '\n';
        jdiag = {{"gamma", diag.gamma},
                 {"s", diag.s},
                 {"N", diag.big_n},
                 {"lambda1", diag.lambda1},
                 {"gap_lhs", diag.lhs},
                 {"gap_rhs", diag.rhs},
                 {"holds", diag.holds},
                 {"mixing_time", diag.mixing_time},
                 {"runtime_estimate", diag.runtime_estimate}};
    }
    json doc = {{"command", "sample-ground"}, {"chains", chains},        {"steps", steps},
                {"k", k},                     {"seed", seed},            {"x_in", cfg.x_in.str()},
                {"samples", lines},           {"diagnostics", jdiag}};
    emit(common, os.str(), doc);
    return 0;
}

int cmd_sample_mbqc(const std::string& graph_path, const std::string& schedule_path,
                    const CommonOpts& common, long long shots) {
    ampsamp::PlanarGraph g = ampsamp::parse_graph_file(graph_path);
    ampsamp::Circuit schedule = ampsamp::parse_circuit_file(schedule_path);
    ampsamp::SurfaceCodeInstance inst = ampsamp::make_surface_instance(std::move(g),
                                                                       std::move(schedule));
    const std::uint64_t seed = resolve_seed(common);

    std::vector<std::string> lines(static_cast<std::size_t>(shots));
    const int nthreads = std::max(1, common.threads);
    auto worker = [&](int w) {
        for (long long i = w; i < shots; i += nthreads) {
            ampsamp::Rng rng(ampsamp::derive_seed(seed, static_cast<std::uint64_t>(i)));
            lines[static_cast<std::size_t>(i)] = ampsamp::mbqc_sample(inst, rng).str();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "# ampsamp sample-mbqc shots=" << shots << " seed=" << seed
       << " edges=" << inst.graph.n() << '\n';
    for (const auto& l : lines) os << l << '\n';
    json doc = {{"command", "sample-mbqc"},
                {"shots", shots},
                {"seed", seed},
                {"edges", inst.graph.n()},
                {"samples", lines}};
    emit(common, os.str(), doc);
    return 0;
}

/// xi for one gate: 1 for recognized Cliffords, the rotation formula for
/// single-qubit diagonal gates (angle folded into [0, pi/2]); anything else
/// is out of scope for the budget model.
double xi_for_gate(const ampsamp::Gate& g) {
    if (ampsamp::is_clifford_gate(g)) return 1.0;
    if (g.arity() == 1 && ampsamp::classify_gate(g) == ampsamp::GateClass::Diagonal) {
        double theta = std::arg(g.matrix(1, 1) / g.matrix(0, 0));
        theta = std::fmod(std::abs(theta), std::numbers::pi);
        theta = std::min(theta, std::numbers::pi - theta);
        return ampsamp::xi_z_rotation(theta);
    }
    throw ampsamp::guard_error("budget: gate '" + g.label +
                               "' is neither Clifford nor a single-qubit rotation");
}

int cmd_budget(const std::string& path, const CommonOpts& common, double delta) {
    ampsamp::Circuit c = ampsamp::parse_circuit_file(path);
    c.require_nonadaptive("budget");
    std::vector<double> xi;
    for (const auto& g : c.gates) xi.push_back(xi_for_gate(g));
    ampsamp::ErrorBudget b = ampsamp::allocate_error_budget(xi, delta);

    std::ostringstream os;
    os << "# ampsamp budget m=" << c.m() << " delta=" << fmt(delta)
       << " columns: t xi_t eps_t\n";
    for (std::size_t t = 0; t < xi.size(); ++t) {
        os << (t + 1) << ' ' << fmt(xi[t]) << ' '
           << (t < b.epsilons.size() ? fmt(b.epsilons[t]) : "-") << '\n';
    }
    os << "# cost exact=" << fmt(b.cost_exact) << " closed_form=" << fmt(b.cost_closed_form)
       << " last_term=" << fmt(b.cost_last_term) << '\n';
    json doc = {{"command", "budget"},
                {"delta", delta},
                {"xi", xi},
                {"epsilons", b.epsilons},
                {"cost",
                 {{"exact", b.cost_exact},
                  {"closed_form", b.cost_closed_form},
                  {"last_term", b.cost_last_term}}}};
    emit(common, os.str(), doc);
    return 0;
}

int cmd_verify(const CommonOpts& common, const std::string& suite, bool quick, double eps) {
    ampsamp::VerifyOptions opts;
    opts.seed = common.seed_given ? common.seed : ampsamp::VerifyOptions{}.seed;
    opts.quick = quick;
    opts.threads = common.threads;
    opts.eps = eps;

    std::vector<ampsamp::SuiteResult> results;
    if (suite.empty())
        results = ampsamp::run_all_suites(opts);
    else
        results.push_back(ampsamp::run_suite(suite, opts));

    bool all = true;
    std::ostringstream os;
    os << "# ampsamp verify columns: suite status detail\n";
    json jres = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        os << r.name << ' ' << (r.pass ? "pass" : "FAIL") << ' ' << r.detail << '\n';
        jres.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    json doc = {{"command", "verify"}, {"all_pass", all}, {"results", jres}};
    emit(common, os.str(), doc);
    return all ? 0 : 1;
}

int cmd_distribution(const std::string& path, const CommonOpts& common) {
    ampsamp::Circuit c = ampsamp::parse_circuit_file(path);
    ampsamp::Distribution d = ampsamp::reference_distribution(c, common.force);
    std::ostringstream os;
    os << "# ampsamp distribution n=" << d.n << " columns: bits probability\n";
    json jp = json::object();
    for (const auto& [x, pr] : d.p) {
        const std::string bits = ampsamp::BitString(x, d.n).str();
        os << bits << ' ' << fmt(pr) << '\n';
        jp[bits] = pr;
    }
    json doc = {{"command", "distribution"}, {"n", d.n}, {"probabilities", jp}};
    emit(common, os.str(), doc);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplitude-based sampling of quantum measurement outcomes"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string circuit_path, ham_path, graph_path, schedule_path;
    long long shots = 1, chains = 1, steps = 1000;
    std::string algorithm = "gate", backend = "statevector", noise_path, x_in, suite;
    bool no_shortcuts = false, magic = false, quick = false;
    int k = 1;
    double delta = 0.1, eps = 0.0, chain_eps = 0.01;

    auto* sc = app.add_subcommand("sample-circuit", "gate-by-gate or qubit-by-qubit sampling");
    sc->add_option("circuit", circuit_path, "circuit file")->required();
    sc->add_option("--shots", shots)->check(CLI::PositiveNumber);
    sc->add_option("--algorithm", algorithm)->check(CLI::IsMember({"gate", "qubit"}));
    sc->add_option("--backend", backend)
        ->check(CLI::IsMember({"statevector", "pathsum", "stabdecomp"}));
    sc->add_option("--noise", noise_path, "noise plan file (robustness experiments)");
    sc->add_flag("--no-shortcuts", no_shortcuts, "resample at every gate");
    add_common(sc, common);

    auto* sg = app.add_subcommand("sample-ground", "Metropolis ground-state sampling");
    sg->add_option("hamiltonian", ham_path, "Hamiltonian or magic-ratio file")->required();
    sg->add_option("--chains", chains)->check(CLI::PositiveNumber);
    sg->add_option("--steps", steps)->check(CLI::PositiveNumber);
    sg->add_option("--k", k, "proposal radius (flip at most k bits)")->check(CLI::PositiveNumber);
    sg->add_option("--x-in", x_in, "start bit string (default: heaviest support state)");
    sg->add_flag("--magic", magic, "input is a magic-ratio instance");
    sg->add_option("--eps", chain_eps, "target TV for mixing-time reporting");
    add_common(sg, common);

    auto* sm = app.add_subcommand("sample-mbqc", "measurement-based sampling on a cycle state");
    sm->add_option("graph", graph_path, "planar graph file")->required();
    sm->add_option("schedule", schedule_path, "per-edge measurement schedule")->required();
    sm->add_option("--shots", shots)->check(CLI::PositiveNumber);
    add_common(sm, common);

    auto* bu = app.add_subcommand("budget", "optimal per-prefix error split and cost report");
    bu->add_option("circuit", circuit_path, "Clifford + rotation circuit file")->required();
    bu->add_option("--delta", delta, "target total statistical error");
    add_common(bu, common);

    auto* ve = app.add_subcommand("verify", "run the acceptance suites");
    ve->add_option("--suite", suite, "run one suite (default: all)")
        ->check(CLI::IsMember(ampsamp::suite_names()));
    ve->add_flag("--quick", quick, "scaled-down corpora");
    ve->add_option("--eps", eps, "robustness: fixed per-prefix epsilon");
    add_common(ve, common);

    auto* di = app.add_subcommand("distribution", "dump the exact output distribution");
    di->add_option("circuit", circuit_path, "circuit file")->required();
    add_common(di, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (common.force)
            std::cerr << "warning: --force overrides size guards; expect long runtimes\n";
        if (sc->parsed())
            return cmd_sample_circuit(circuit_path, common, shots, algorithm, backend,
                                      noise_path, no_shortcuts);
        if (sg->parsed())
            return cmd_sample_ground(ham_path, common, chains, steps, k, x_in, magic, chain_eps);
        if (sm->parsed()) return cmd_sample_mbqc(graph_path, schedule_path, common, shots);
        if (bu->parsed()) return cmd_budget(circuit_path, common, delta);
        if (ve->parsed()) return cmd_verify(common, suite, quick, eps);
        if (di->parsed()) return cmd_distribution(circuit_path, common);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
