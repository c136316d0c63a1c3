#include "cli.hpp"

#include "portfeas/analytics.hpp"
#include "portfeas/dominance.hpp"
#include "portfeas/errors.hpp"
#include "portfeas/experiments.hpp"
#include "portfeas/risk.hpp"
#include "portfeas/sample.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace portfeas::cli {

namespace {

struct Options {
    unsigned threads = 1;

    // gen-sample / mc-feasibility
    std::string family = "gauss";
    std::int64_t n = 0;
    std::int64_t t = 0;
    std::uint64_t seed = 0;
    std::string cov_path;
    double df = 0.0;

    // optimize / dominance
    std::string measure;
    double alpha = 0.0;
    bool long_only = false;
    std::string sample_path;

    // mc-feasibility / phase-diagram
    std::int64_t trials = 0;
    std::string alphas;

    std::string out_path;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const Eigen::VectorXd& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) s += ',';
        s += fmt(v(i));
    }
    return s;
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
    if (opt.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!file) throw IoError("cannot write " + opt.out_path);
    file << text;
}

DistributionSpec make_spec(const Options& opt) {
    const auto family = parse_family(opt.family);
    if (!family) throw InputError("unknown family '" + opt.family + "'");
    DistributionSpec spec;
    spec.family = *family;
    if (!opt.cov_path.empty()) {
        std::ifstream in(opt.cov_path, std::ios::binary);
        if (!in) throw IoError("cannot open " + opt.cov_path);
        std::stringstream buf;
        buf << in.rdbuf();
        spec.covariance = parse_matrix_csv(buf.str());
    }
    if (spec.family == Family::StudentTElliptical) spec.degrees_of_freedom = opt.df;
    return spec;
}

Measure make_measure(const Options& opt) {
    if (opt.measure == "minimax") return Measure::minimax();
    if (opt.measure == "es") return Measure::expected_shortfall(opt.alpha);
    throw InputError("unknown measure '" + opt.measure + "'");
}

int gen_sample(const Options& opt, std::ostream& err) {
    const ReturnSample sample = generate_sample(make_spec(opt), opt.n, opt.t, opt.seed);
    save_sample(sample, opt.out_path);
    err << "wrote " << opt.n << "x" << opt.t << " " << opt.family << " sample (seed " << opt.seed
        << ") to " << opt.out_path << "\n";
    return kSuccess;
}

int optimize(const Options& opt, std::ostream& out, std::ostream& err) {
    const ReturnSample sample = load_sample(opt.sample_path);
    OptimizationReport report;
    if (opt.measure == "minimax") {
        report = optimize_minimax(sample, opt.long_only);
    } else if (opt.measure == "es") {
        report = optimize_es(sample, EsParams{opt.alpha, opt.long_only});
    } else {
        throw InputError("unknown measure '" + opt.measure + "'");
    }
    std::string text = "status=" + std::string(to_string(report.status)) + "\n";
    switch (report.status) {
    case RiskStatus::Optimal:
        text += "value=" + fmt(report.risk_value) + "\n";
        text += "weights=" + join(report.portfolio.weights) + "\n";
        err << opt.measure << ": optimal, risk " << report.risk_value << "\n";
        break;
    case RiskStatus::UnboundedBelow:
        text += "direction=" + join(report.direction) + "\n";
        err << opt.measure << ": risk is unbounded below along the reported direction\n";
        break;
    case RiskStatus::InfeasibleInput:
        err << opt.measure << ": constraint set is empty\n";
        break;
    }
    emit(opt, text, out);
    return kSuccess;
}

int dominance(const Options& opt, std::ostream& out, std::ostream& err) {
    const ReturnSample sample = load_sample(opt.sample_path);
    const auto witness = find_strict_dominance(sample);
    std::string text;
    if (witness) {
        text = "dominance=strict\n";
        text += "dominating=" + join(witness->dominating.weights) + "\n";
        text += "dominated=" + join(witness->dominated.weights) + "\n";
        text += "gaps=" + join(witness->gaps) + "\n";
        err << "sample admits a strictly dominating pair of portfolios\n";
    } else {
        text = "dominance=none\n";
        err << "no strictly dominating pair on this sample\n";
    }
    emit(opt, text, out);
    return kSuccess;
}

int exact_prob(const Options& opt, std::ostream& out, std::ostream& err) {
    const FeasibilityProbability p = exact_minimax_feasibility(opt.n, opt.t);
    emit(opt, fmt(p.probability) + "\n", out);
    err << "p(N=" << opt.n << ", T=" << opt.t << ") = " << p.probability << "\n";
    return kSuccess;
}

int mc_feasibility(const Options& opt, std::ostream& out, std::ostream& err) {
    const FeasibilityEstimate e = estimate_feasibility(make_measure(opt), opt.n, opt.t,
                                                       make_spec(opt), opt.trials, opt.seed,
                                                       opt.threads);
    emit(opt, format_csv(std::vector<FeasibilityEstimate>{e}), out);
    err << e.measure.name() << " N=" << e.n_assets << " T=" << e.n_periods << ": " << e.feasible
        << "/" << e.trials << " feasible (" << e.fraction << ", 95% CI [" << e.ci_low << ", "
        << e.ci_high << "])";
    if (e.anomalies > 0) err << ", " << e.anomalies << " solver anomalies";
    err << "\n";
    return kSuccess;
}

std::vector<double> parse_alphas(const std::string& text) {
    std::vector<double> alphas;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double a = 0.0;
        try {
            a = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InputError("bad alpha '" + item + "'");
        alphas.push_back(a);
    }
    if (alphas.empty()) throw InputError("--alphas is empty");
    return alphas;
}

int phase_diagram(const Options& opt, std::ostream& out, std::ostream& err) {
    SweepOptions sweep;
    sweep.threads = opt.threads;
    const auto points = sweep_phase_boundary(parse_alphas(opt.alphas), opt.t, opt.trials,
                                             opt.seed, sweep);
    emit(opt, format_csv(points), out);
    for (const auto& p : points) {
        err << "alpha=" << p.alpha << " critical N/T=" << p.critical_ratio << " (bracket "
            << p.bracket_width << ")\n";
    }
    return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Portfolio feasibility laboratory: Minimax and Expected Shortfall on finite samples",
                 "portfeas"};
    app.require_subcommand(1, 1);
    app.add_option("--threads", opt.threads, "Worker threads for Monte Carlo trials")
        ->check(CLI::Range(1u, 1024u));

    auto* gen = app.add_subcommand("gen-sample", "Draw an N x T return sample");
    gen->add_option("--family", opt.family, "gauss | corr-gauss | student-t")
        ->check(CLI::IsMember({"gauss", "corr-gauss", "student-t"}));
    gen->add_option("--n", opt.n, "Number of assets")->required();
    gen->add_option("--t", opt.t, "Number of periods")->required();
    gen->add_option("--seed", opt.seed, "64-bit seed")->required();
    gen->add_option("--cov", opt.cov_path, "Covariance matrix CSV");
    gen->add_option("--df", opt.df, "Student-t degrees of freedom");
    gen->add_option("--out", opt.out_path, "Output sample CSV")->required();

    auto* optim = app.add_subcommand("optimize", "Minimize Maximal Loss or Expected Shortfall");
    optim->add_option("--measure", opt.measure, "minimax | es")
        ->required()
        ->check(CLI::IsMember({"minimax", "es"}));
    auto* alpha_opt = optim->add_option("--alpha", opt.alpha, "ES confidence level in (0,1)");
    optim->add_flag("--long-only", opt.long_only, "Forbid short positions");
    optim->add_option("--sample", opt.sample_path, "Sample CSV")->required();
    optim->add_option("--out", opt.out_path, "Output file (default stdout)");

    auto* dom = app.add_subcommand("dominance", "Search for a strictly dominating portfolio pair");
    dom->add_option("--sample", opt.sample_path, "Sample CSV")->required();
    dom->add_option("--out", opt.out_path, "Output file (default stdout)");

    auto* prob = app.add_subcommand("exact-prob", "Exact Minimax feasibility probability p(N,T)");
    prob->add_option("--n", opt.n, "Number of assets")->required();
    prob->add_option("--t", opt.t, "Number of periods")->required();
    prob->add_option("--out", opt.out_path, "Output file (default stdout)");

    auto* mc = app.add_subcommand("mc-feasibility", "Monte Carlo feasible fraction");
    mc->add_option("--measure", opt.measure, "minimax | es")
        ->required()
        ->check(CLI::IsMember({"minimax", "es"}));
    mc->add_option("--n", opt.n, "Number of assets")->required();
    mc->add_option("--t", opt.t, "Number of periods")->required();
    mc->add_option("--trials", opt.trials, "Number of samples")->required();
    mc->add_option("--seed", opt.seed, "64-bit seed")->required();
    auto* mc_alpha = mc->add_option("--alpha", opt.alpha, "ES confidence level");
    mc->add_option("--family", opt.family, "gauss | corr-gauss | student-t")
        ->check(CLI::IsMember({"gauss", "corr-gauss", "student-t"}));
    mc->add_option("--cov", opt.cov_path, "Covariance matrix CSV");
    mc->add_option("--df", opt.df, "Student-t degrees of freedom");
    mc->add_option("--out", opt.out_path, "Output feasibility CSV (default stdout)");

    auto* phase = app.add_subcommand("phase-diagram", "Critical N/T versus alpha (1 = Minimax)");
    phase->add_option("--alphas", opt.alphas, "Comma-separated alphas in (0,1]")->required();
    phase->add_option("--t", opt.t, "Number of periods")->required();
    phase->add_option("--trials", opt.trials, "Trials per cell")->required();
    phase->add_option("--seed", opt.seed, "64-bit seed")->required();
    phase->add_option("--out", opt.out_path, "Output phase-boundary CSV")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kInputError;
    }

    try {
        if (*gen) return gen_sample(opt, err);
        if (*optim) {
            if (opt.measure == "es" && alpha_opt->count() == 0) {
                throw InputError("--measure es requires --alpha");
            }
            return optimize(opt, out, err);
        }
        if (*dom) return dominance(opt, out, err);
        if (*prob) return exact_prob(opt, out, err);
        if (*mc) {
            if (opt.measure == "es" && mc_alpha->count() == 0) {
                throw InputError("--measure es requires --alpha");
            }
            return mc_feasibility(opt, out, err);
        }
        if (*phase) return phase_diagram(opt, out, err);
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace portfeas::cli
