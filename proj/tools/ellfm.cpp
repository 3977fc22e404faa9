// Command-line front end: evaluation, verification suites, label enumeration, timing.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellfm.hpp"

namespace
{

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_conditioning = 2;
constexpr int exit_usage = 3;

nlohmann::json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ellfm::domain_error("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ellfm::domain_error(path + ": " + e.what());
    }
}

void write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out) {
        throw ellfm::domain_error("cannot write " + path);
    }
    out << text;
}

std::string format_complex(ellfm::cplx z)
{
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

struct EvalOptions
{
    std::string kind;
    std::string params;
    std::string label;
    std::string mode = "both";
    std::string theta = "additive";
    bool json = false;
};

int run_eval(const EvalOptions &o)
{
    using namespace ellfm;
    const ParamsFile pf = params_from_json(read_json(o.params));
    const nlohmann::json lj = read_json(o.label);
    const ThetaContext th = pf.context();
    nlohmann::ordered_json out;
    out["kind"] = o.kind;

    auto put = [&](const char *name, cplx v) {
        out[name] = complex_to_json(v);
        if (!o.json) {
            std::cout << name << " = " << format_complex(v) << '\n';
        }
    };
    auto compare = [&](cplx a, cplx b) {
        const double e = rel_error(a, b);
        out["rel_difference"] = e;
        if (!o.json) {
            std::cout << "rel_difference = " << e << '\n';
        }
    };

    if (o.kind == "base") {
        const BaseLattice lat = base_lattice_from(pf, base_label_from_json(lj));
        const RContext r(2, th);
        if (o.mode != "closed") {
            put("brute_force", brute_force_base(r, lat));
        }
        if (o.mode != "brute") {
            put("closed_form", eval_E_base(th, lat));
        }
        if (o.mode == "both") {
            compare(brute_force_base(r, lat), eval_E_base(th, lat));
        }
    } else if (o.kind == "fm") {
        const FMLattice lat = fm_lattice_from(pf, fm_label_from_json(lj));
        const RContext r(3, th);
        if (o.mode != "closed") {
            put("brute_force", brute_force_fm(r, lat));
        }
        if (o.mode != "brute") {
            put("closed_form", eval_E_fm(th, lat));
        }
        if (o.mode == "both") {
            compare(brute_force_fm(r, lat), eval_E_fm(th, lat));
        }
    } else if (o.kind == "ebar") {
        const FMLattice lat = fm_lattice_from(pf, fm_label_from_json(lj));
        put("ebar", eval_E_bar(th, lat));
    } else if (o.kind == "weight") {
        const FMLattice lat = fm_lattice_from(pf, fm_label_from_json(lj));
        const WeightConfig wc = correspondence_map(lat);
        const ThetaMode m = (o.theta == "multiplicative") ? ThetaMode::multiplicative : ThetaMode::additive;
        put("normalized_weight", normalized_weight(th, wc, m));
        out["theta_power"] = normalized_theta_power(wc);
    } else {
        throw domain_error("unknown eval kind " + o.kind);
    }
    if (o.json) {
        std::cout << out.dump(2) << '\n';
    }
    return exit_pass;
}

struct VerifyOptions
{
    std::string suite;
    std::uint64_t seed = 42;
    int max_l2 = -1;
    int max_k = -1;
    int max_l = -1;
    int draws = -1;
    double tolerance = -1.0;
    std::string report;
    std::string csv;
    bool quiet = false;
};

int run_verify(const VerifyOptions &o)
{
    using namespace ellfm;
    SuiteConfig cfg;
    cfg.seed = o.seed;
    if (o.max_l2 >= 0) {
        cfg.envelope.max_L2 = o.max_l2;
    }
    if (o.max_l >= 0) {
        cfg.envelope.max_L = o.max_l;
    }
    if (o.max_k >= 0) {
        cfg.envelope.max_k = o.max_k;
        cfg.envelope.max_k1 = o.max_k;
        cfg.envelope.max_k2 = o.max_k;
    }
    if (o.draws >= 1) {
        cfg.draws = o.draws;
    }
    if (o.tolerance > 0.0) {
        cfg.identity_tol = o.tolerance;
        cfg.equivalence_tol = o.tolerance;
    }
    const SuiteReport rep = run_suite(o.suite, cfg);
    const std::string text = rep.to_json().dump(2) + "\n";
    if (!o.report.empty()) {
        write_file(o.report, text);
    }
    if (!o.csv.empty()) {
        write_file(o.csv, rep.to_csv());
    }
    if (!o.quiet) {
        std::size_t failed = 0;
        for (const auto &c : rep.cases) {
            if (!c.pass()) {
                ++failed;
                std::cout << c.status << ": " << c.id << " [" << c.label << "] err=" << c.max_rel_error << '\n';
            }
        }
        std::cout << "suite " << rep.suite << ": " << rep.status << " (" << rep.cases.size() << " cases, " << failed
                  << " not passing, worst " << rep.worst << ", " << rep.wall_time_s << " s)\n";
    }
    return rep.exit_code();
}

int run_enumerate(const std::string &sizes, bool json)
{
    using namespace ellfm;
    int k1 = 0, k2 = 0, L1 = 0, L2 = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream is(sizes);
    if (!(is >> k1 >> c1 >> k2 >> c2 >> L1 >> c3 >> L2) || c1 != ',' || c2 != ',' || c3 != ',') {
        throw domain_error("--sizes expects k1,k2,L1,L2");
    }
    const auto labels = enumerate_labels(k1, k2, L1, L2);
    if (json) {
        auto arr = nlohmann::json::array();
        for (const auto &lb : labels) {
            arr.push_back(label_to_json(lb));
        }
        std::cout << arr.dump(2) << '\n';
        return exit_pass;
    }
    for (const auto &lb : labels) {
        std::cout << label_string(lb) << "  i2=";
        for (int c : lb.colors2()) {
            std::cout << c;
        }
        std::cout << " i1=";
        for (int c : lb.colors1()) {
            std::cout << c;
        }
        std::cout << '\n';
    }
    std::cout << labels.size() << " labels\n";
    return exit_pass;
}

template <typename F>
double time_us(F &&f, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    volatile double sink = 0.0;
    for (int i = 0; i < reps; ++i) {
        sink = sink + std::abs(f());
    }
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count() / reps;
}

int run_bench(int reps)
{
    using namespace ellfm;
    SuiteConfig cfg;
    std::printf("%-28s %14s %14s %10s\n", "instance", "contract_us", "closed_us", "rel_diff");
    for (int L = 1; L <= 4; ++L) {
        for (int k = 1; k <= std::min(L, 2); ++k) {
            const auto d = sample_parameters(cfg, "bench/base", DrawShape{k, 0, L, 0});
            const ThetaContext th(d.tau);
            const RContext r(2, th);
            const BaseLabel lb = enumerate_base_labels(L, k).back();
            const BaseLattice lat{d.z1, d.w1, {{d.lambda[0], d.lambda[1]}, d.gamma}, lb};
            const double tb = time_us([&] { return brute_force_base(r, lat); }, reps);
            const double tc = time_us([&] { return eval_E_base(th, lat); }, reps);
            std::printf("%-28s %14.2f %14.2f %10.2e\n", ("base " + label_string(lb)).c_str(), tb, tc,
                        rel_error(brute_force_base(r, lat), eval_E_base(th, lat)));
        }
    }
    const DrawShape shapes[] = {{1, 1, 1, 1}, {1, 2, 1, 2}, {2, 2, 2, 3}};
    for (const auto &s : shapes) {
        const auto d = sample_parameters(cfg, "bench/fm", s);
        const ThetaContext th(d.tau);
        const RContext r(3, th);
        const FMLabel lb = enumerate_labels(s.k1, s.k2, s.L1, s.L2).back();
        const FMLattice lat{d.z1, d.z2, d.w1, d.w2, {d.lambda, d.gamma}, lb};
        const double tb = time_us([&] { return brute_force_fm(r, lat); }, reps);
        const double tc = time_us([&] { return eval_E_fm(th, lat); }, reps);
        std::printf("%-28s %14.2f %14.2f %10.2e\n", ("fm " + label_string(lb)).c_str(), tb, tc,
                    rel_error(brute_force_fm(r, lat), eval_E_fm(th, lat)));
    }
    return exit_pass;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Elliptic partition functions: evaluation and verification"};
    app.require_subcommand(1);

    EvalOptions eval;
    auto *eval_cmd = app.add_subcommand("eval", "Evaluate a partition function or weight function");
    eval_cmd->add_option("kind", eval.kind, "base, fm, ebar or weight")
        ->required()
        ->check(CLI::IsMember({"base", "fm", "ebar", "weight"}));
    eval_cmd->add_option("--params", eval.params, "Parameter JSON file")->required();
    eval_cmd->add_option("--label", eval.label, "Label JSON file")->required();
    eval_cmd->add_option("--mode", eval.mode, "brute, closed or both")->check(CLI::IsMember({"brute", "closed", "both"}));
    eval_cmd->add_option("--theta", eval.theta, "additive or multiplicative (weight only)")
        ->check(CLI::IsMember({"additive", "multiplicative"}));
    eval_cmd->add_flag("--json", eval.json, "Print JSON");

    VerifyOptions verify;
    auto *verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    std::vector<std::string> suites = ellfm::suite_names();
    suites.push_back("dybe");
    suites.push_back("all");
    verify_cmd->add_option("suite", verify.suite, "Suite name")->required()->check(CLI::IsMember(suites));
    verify_cmd->add_option("--seed", verify.seed, "Random seed");
    verify_cmd->add_option("--max-l2", verify.max_l2, "Largest L2 in the envelope")->check(CLI::Range(0, 4));
    verify_cmd->add_option("--max-l", verify.max_l, "Largest L for base lattices")->check(CLI::Range(1, 6));
    verify_cmd->add_option("--max-k", verify.max_k, "Largest k, k1, k2")->check(CLI::Range(0, 3));
    verify_cmd->add_option("--draws", verify.draws, "Random draws per size")->check(CLI::Range(1, 100));
    verify_cmd->add_option("--tolerance", verify.tolerance, "Relative tolerance for identities")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--report", verify.report, "Write the JSON report here");
    verify_cmd->add_option("--csv", verify.csv, "Write the CSV projection here");
    verify_cmd->add_flag("--quiet", verify.quiet, "Only set the exit status");

    std::string sizes;
    bool enum_json = false;
    auto *enum_cmd = app.add_subcommand("enumerate-labels", "List labels of one size");
    enum_cmd->add_option("--sizes", sizes, "k1,k2,L1,L2")->required();
    enum_cmd->add_flag("--json", enum_json, "Print JSON");

    int reps = 20;
    auto *bench_cmd = app.add_subcommand("bench", "Contraction vs closed form timing table");
    bench_cmd->add_option("--reps", reps, "Repetitions per instance")->check(CLI::Range(1, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*eval_cmd) {
            return run_eval(eval);
        }
        if (*verify_cmd) {
            return run_verify(verify);
        }
        if (*enum_cmd) {
            return run_enumerate(sizes, enum_json);
        }
        if (*bench_cmd) {
            return run_bench(reps);
        }
    } catch (const ellfm::pole_error &e) {
        std::cerr << "conditioning: " << e.what() << '\n';
        return exit_conditioning;
    } catch (const ellfm::conditioning_error &e) {
        std::cerr << "conditioning: " << e.what() << '\n';
        return exit_conditioning;
    } catch (const ellfm::error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
