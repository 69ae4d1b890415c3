// scordant: batch experiment harness. Every checker of the library is
// exposed as a subcommand that writes a machine-readable JSON report
// (schema 1) plus CSV artifacts where a grid is involved.
//
// Exit codes: 0 pass, 1 usage error, 2 bound violation, 3 premise not met.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scordant/concentration.hpp"
#include "scordant/datagen.hpp"
#include "scordant/lasso.hpp"
#include "scordant/newton.hpp"
#include "scordant/remainder.hpp"
#include "scordant/ridge.hpp"
#include "scordant/rng.hpp"
#include "scordant/scfn.hpp"

namespace {

using json = nlohmann::json;
using namespace scordant;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitPremise = 3;

json vector_to_json(const VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

class Report {
  public:
    Report(std::string command, json config)
        : start_(std::chrono::steady_clock::now()) {
        doc_["schema"] = 1;
        doc_["command"] = std::move(command);
        doc_["config"] = std::move(config);
        doc_["checks"] = json::array();
    }

    void add_check(const std::string& name, bool premise_ok, double lhs,
                   double rhs, bool pass, json extra = json::object()) {
        extra["name"] = name;
        extra["premise_ok"] = premise_ok;
        extra["lhs"] = lhs;
        extra["rhs"] = rhs;
        extra["pass"] = pass;
        doc_["checks"].push_back(std::move(extra));
        all_pass_ = all_pass_ && pass;
        premise_ok_ = premise_ok_ && premise_ok;
    }

    void set(const std::string& key, json value) { doc_[key] = std::move(value); }

    bool all_pass() const { return all_pass_; }
    bool premise_ok() const { return premise_ok_; }

    int finish(const std::string& out_path) {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        doc_["wall_time_seconds"] = elapsed;
        const int code = !premise_ok_ ? kExitPremise
                         : all_pass_  ? kExitPass
                                      : kExitViolation;
        doc_["exit_code"] = code;
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << doc_.dump(2) << '\n';
        }
        std::cout << doc_.dump(2) << '\n';
        return code;
    }

  private:
    json doc_;
    bool all_pass_ = true;
    bool premise_ok_ = true;
    std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    if (out.empty()) throw CLI::ValidationError("empty grid");
    return out;
}

bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-9 * (std::abs(rhs) + 1.0); }

// ---------------------------------------------------------------- verify-bounds

struct VerifyBoundsOptions {
    int instances = 30;
    int draws = 12;
    std::uint64_t seed = 1;
    std::string dims = "40,5";
    std::string out;
    bool inject_fault = false;  // test hook: corrupts the upper Taylor bound
};

int run_verify_bounds(const VerifyBoundsOptions& opt) {
    const auto dims = parse_grid(opt.dims);
    if (dims.size() != 2) throw CLI::ValidationError("--dims must be \"n,p\"");
    const auto n = static_cast<Eigen::Index>(dims[0]);
    const auto p = static_cast<Eigen::Index>(dims[1]);

    Report report("verify-bounds",
                  {{"instances", opt.instances},
                   {"draws", opt.draws},
                   {"seed", opt.seed},
                   {"n", n},
                   {"p", p},
                   {"inject_fault", opt.inject_fault}});

    long checks_run = 0;
    long failures = 0;
    json counterexample;

    auto record_failure = [&](const std::string& what, const VectorXd& w,
                              const VectorXd& v, double lhs, double rhs) {
        ++failures;
        if (counterexample.is_null()) {
            counterexample = {{"check", what},
                              {"w", vector_to_json(w)},
                              {"v", vector_to_json(v)},
                              {"lhs", lhs},
                              {"rhs", rhs}};
        }
    };

    for (int inst = 0; inst < opt.instances; ++inst) {
        datagen::InstanceSpec spec;
        spec.n = n;
        spec.p = p;
        spec.w0_kind = datagen::InstanceSpec::W0::dense;
        spec.w0_norm = 1.0;
        spec.seed = opt.seed + static_cast<std::uint64_t>(inst);
        const auto problem = datagen::generate(spec);
        const VectorXd labels = logistic::sample_labels(problem, spec.seed, 999);
        const ScfnOracle oracle = logistic::empirical_objective(problem, labels);

        auto rng = substream(opt.seed, 100000 + static_cast<std::uint64_t>(inst));
        for (int d = 0; d < opt.draws; ++d) {
            VectorXd w(p), v(p), z(p), u_dir(p);
            for (Eigen::Index j = 0; j < p; ++j) {
                w(j) = normal(rng);
                v(j) = normal(rng);
                z(j) = normal(rng);
                u_dir(j) = normal(rng);
            }
            w *= 0.5;
            v *= std::pow(10.0, -2.0 + 2.5 * uniform01(rng));

            const auto ts = scfn::taylor_sandwich(oracle, w, v);
            double upper = ts.upper;
            if (opt.inject_fault) {
                // deliberately too-tight upper bound (below the proven lower
                // remainder), guaranteed to be contradicted
                const double lin = oracle.value(w) + v.dot(oracle.gradient(w));
                const double quad = v.dot(oracle.hessian(w) * v);
                upper = lin + 0.5 * quad *
                                  phi_minus(oracle.r_constant * v.norm());
            }
            checks_run += 2;
            if (!leq(ts.lower, ts.value_at_w_plus_v)) {
                record_failure("eq4_lower", w, v, ts.lower, ts.value_at_w_plus_v);
            }
            if (!leq(ts.value_at_w_plus_v, upper)) {
                record_failure("eq5_upper", w, v, ts.value_at_w_plus_v, upper);
            }

            const auto ge = scfn::gradient_expansion_bound(oracle, w, v, z);
            ++checks_run;
            if (!leq(ge.lhs, ge.rhs)) record_failure("eq6", w, v, ge.lhs, ge.rhs);

            const auto hs = scfn::hessian_sandwich(oracle, w, v);
            ++checks_run;
            if (!hs.holds) record_failure("eq7", w, v, 0.0, 0.0);

            const auto hd = scfn::hessian_difference_bound(oracle, w, v, z, u_dir);
            ++checks_run;
            if (!leq(hd.lhs, hd.rhs)) record_failure("eq16", w, v, hd.lhs, hd.rhs);

            // Lemma 1 on the scalar logistic loss (S = 1)
            const double u0 = 4.0 * (uniform01(rng) - 0.5);
            const double t = 3.0 * uniform01(rng);
            const auto us = scfn::univariate_sandwich(
                logistic::ell(u0), logistic::ell_d1(u0), logistic::ell_d2(u0),
                1.0, t);
            const double gval = logistic::ell(u0 + t);
            checks_run += 2;
            if (!leq(us.lower, gval) || !leq(gval, us.upper)) {
                record_failure("eq14", VectorXd::Constant(1, u0),
                               VectorXd::Constant(1, t), us.lower, us.upper);
            }
        }

        // Prop 2 certificate bounds (Eqs 8-10) on the ridge-regularized
        // objective, from a premise-holding point near the minimizer
        const double lambda = 0.25 * problem.radius_R * problem.radius_R;
        const ScfnOracle reg = add_ridge(oracle, lambda);
        newton::SolveOptions sopt;
        sopt.tol_nu = 1e-13;
        const auto sol = newton::solve(reg, VectorXd::Zero(p), 0.0, sopt);
        VectorXd pert(p);
        for (Eigen::Index j = 0; j < p; ++j) pert(j) = normal(rng);
        const VectorXd w_test = sol.w_star + 0.05 * pert / pert.norm();
        const auto cert = newton::certify(reg, w_test);
        if (cert.premise_holds) {
            const auto verdict = newton::verify_prop2(reg, w_test, sol.w_star);
            checks_run += 3;
            if (!verdict.eq8_ok) {
                record_failure("eq8", w_test, sol.w_star, verdict.eq8_lhs,
                               verdict.eq8_rhs);
            }
            if (!verdict.eq9_ok) {
                record_failure("eq9", w_test, sol.w_star, verdict.eq9_lhs,
                               verdict.eq9_rhs);
            }
            if (!verdict.eq10_ok) {
                record_failure("eq10", w_test, sol.w_star, verdict.eq10_lhs,
                               verdict.eq10_rhs);
            }
        }
    }

    report.add_check("deterministic_inequalities", true,
                     static_cast<double>(failures), 0.0, failures == 0,
                     {{"checks_run", checks_run}});
    if (!counterexample.is_null()) report.set("counterexample", counterexample);
    return report.finish(opt.out);
}

// -------------------------------------------------------------- ridge-experiment

struct RidgeOptions {
    std::string theorem = "2";
    int reps = 200;
    double delta = 0.5;
    double v = -1.0;  // <= 0: choose v with v^2 (d2 + n b2) = 4
    Eigen::Index n = 2000;
    Eigen::Index p = 10;
    std::uint64_t seed = 1;
    double lambda = -1.0;
    double kappa = -1.0;  // > 0: engineer the instance for this kappa
    double w0_norm = 1.0;
    bool misspecified = false;
    std::string out = "ridge_report.json";
    std::string diag_csv = "ridge_diagnostics.csv";
};

void write_diagnostics_csv(const logistic::DesignProblem& problem,
                           const std::string& path) {
    const auto grid = ridge::lambda_grid(problem.radius_R, 1e-3, 10.0, 10);
    std::ofstream out(path);
    out.precision(17);
    out << "lambda,d1,d2,b1,b2,kappa,kappa_bias,kappa_var\n";
    for (double lambda : grid) {
        const auto d = ridge::diagnostics(problem, lambda);
        out << lambda << ',' << d.d1 << ',' << d.d2 << ',' << d.b1 << ','
            << d.b2 << ',' << d.kappa << ',' << d.kappa_bias << ','
            << d.kappa_var << '\n';
    }
}

int run_ridge(const RidgeOptions& opt) {
    Report report("ridge-experiment",
                  {{"theorem", opt.theorem},
                   {"reps", opt.reps},
                   {"delta", opt.delta},
                   {"v", opt.v},
                   {"n", opt.n},
                   {"p", opt.p},
                   {"seed", opt.seed},
                   {"lambda", opt.lambda},
                   {"kappa", opt.kappa},
                   {"misspecified", opt.misspecified}});

    logistic::DesignProblem problem;
    double lambda = opt.lambda;
    if (opt.kappa > 0.0) {
        const auto eng = datagen::engineer_kappa(opt.kappa, opt.n, opt.p, opt.seed);
        problem = eng.problem;
        if (lambda <= 0.0) lambda = eng.diag.lambda;
    } else {
        datagen::InstanceSpec spec;
        spec.n = opt.n;
        spec.p = opt.p;
        spec.w0_kind = datagen::InstanceSpec::W0::dense;
        spec.w0_norm = opt.w0_norm;
        spec.misspecified = opt.misspecified;
        spec.delta_link = opt.misspecified ? 0.2 : 0.0;
        spec.seed = opt.seed;
        problem = datagen::generate(spec);
    }

    try {
        if (opt.theorem == "1") {
            const auto res =
                ridge::theorem1_check(problem, opt.delta, opt.reps, opt.seed);
            report.add_check("theorem1_violation_rate", true, res.violation_rate,
                             res.rate_ceiling, res.pass,
                             {{"lambda", res.lambda}});
        } else if (opt.theorem == "2" || opt.theorem == "3") {
            if (lambda <= 0.0) {
                throw Error("ridge-experiment: need --lambda or --kappa");
            }
            double v = opt.v;
            if (v <= 0.0) {
                const auto d = ridge::diagnostics(problem, lambda);
                v = std::min(0.25, 2.0 / std::sqrt(d.d2 +
                                                   static_cast<double>(opt.n) * d.b2));
            }
            if (opt.theorem == "2") {
                const auto res =
                    ridge::theorem2_check(problem, lambda, v, opt.reps, opt.seed);
                report.add_check(
                    "theorem2_holding_freq", true, res.freq_floor,
                    res.empirical_freq, res.pass,
                    {{"kappa", res.diag.kappa},
                     {"v", res.v},
                     {"center", res.center},
                     {"half_width", res.half_width},
                     {"mean_excess_risk", res.mean_excess_risk}});
            } else {
                const auto res =
                    ridge::theorem3_check(problem, lambda, v, opt.reps, opt.seed);
                report.add_check("theorem3_holding_freq", true, res.freq_floor,
                                 res.empirical_freq, res.pass,
                                 {{"v", res.v}, {"half_width", res.half_width}});
            }
        } else if (opt.theorem == "prop3") {
            if (lambda <= 0.0) {
                throw Error("ridge-experiment: need --lambda or --kappa");
            }
            int premise_ok = 0, holds = 0;
            for (int rep = 0; rep < opt.reps; ++rep) {
                const VectorXd y = logistic::sample_labels(problem, opt.seed, rep);
                try {
                    const auto res = ridge::prop3_check(problem, lambda, y);
                    ++premise_ok;
                    if (res.holds) ++holds;
                } catch (const PremiseError&) {
                }
            }
            report.add_check("prop3_eq18", premise_ok > 0,
                             static_cast<double>(holds),
                             static_cast<double>(premise_ok),
                             premise_ok > 0 && holds == premise_ok,
                             {{"premise_holding_reps", premise_ok}});
        } else {
            throw CLI::ValidationError("--theorem must be 1, 2, 3 or prop3");
        }
    } catch (const PremiseError& e) {
        report.add_check(std::string("premise"), false, 0.0, 0.0, true,
                         {{"message", e.what()}});
    }

    if (!opt.diag_csv.empty() && problem.label_prob) {
        write_diagnostics_csv(problem, opt.diag_csv);
    }
    return report.finish(opt.out);
}

// -------------------------------------------------------------- lasso-experiment

struct LassoOptions {
    std::string theorem = "4";
    int reps = 200;
    Eigen::Index n = 2000;
    Eigen::Index p = 10;
    Eigen::Index sparsity = 3;
    double amplitude = 1.0;
    double lambda_frac = 0.8;  // fraction of the applicable cap
    std::uint64_t seed = 1;
    bool phase_diagram = false;
    std::string phase_ns = "500,1000,2000";
    std::string phase_fracs = "0.2,0.5,0.8";
    std::string out = "lasso_report.json";
    std::string phase_csv = "lasso_phase.csv";
};

logistic::DesignProblem make_lasso_problem(const LassoOptions& opt,
                                           Eigen::Index n) {
    datagen::InstanceSpec spec;
    spec.n = n;
    spec.p = opt.p;
    spec.w0_kind = datagen::InstanceSpec::W0::sparse;
    spec.sparsity = opt.sparsity;
    spec.amplitude = opt.amplitude;
    spec.normalize = true;
    spec.seed = opt.seed;
    return datagen::generate(spec);
}

int run_lasso(const LassoOptions& opt) {
    Report report("lasso-experiment",
                  {{"theorem", opt.theorem},
                   {"reps", opt.reps},
                   {"n", opt.n},
                   {"p", opt.p},
                   {"sparsity", opt.sparsity},
                   {"amplitude", opt.amplitude},
                   {"lambda_frac", opt.lambda_frac},
                   {"seed", opt.seed},
                   {"phase_diagram", opt.phase_diagram}});

    try {
        const auto problem = make_lasso_problem(opt, opt.n);
        const auto diag = lasso::consistency_diagnostics(problem, opt.seed);
        report.set("diagnostics",
                   {{"eta", diag.eta},
                    {"rho_min", diag.rho_min},
                    {"mu", diag.mu},
                    {"re_rho", diag.re.rho},
                    {"re_exact", diag.re.exact},
                    {"cap_mu", diag.cap_mu},
                    {"cap_eta", diag.cap_eta},
                    {"cap_efficiency", diag.cap_efficiency},
                    {"radius_on_support", diag.radius_on_support}});

        if (opt.theorem == "4") {
            const double lambda =
                opt.lambda_frac * std::min(diag.cap_mu, diag.cap_eta);
            const auto res =
                lasso::theorem4_check(problem, lambda, opt.reps, opt.seed);
            report.add_check("theorem4_sign_error_rate", true,
                             res.sign_error_rate, res.rate_ceiling, res.pass,
                             {{"lambda", lambda},
                              {"bound_eq13", res.bound_eq13},
                              {"vacuous", res.vacuous}});
        } else if (opt.theorem == "5") {
            const double lambda = opt.lambda_frac * diag.cap_efficiency;
            const auto res =
                lasso::theorem5_check(problem, lambda, opt.reps, opt.seed);
            report.add_check("theorem5_joint_holding_freq", true,
                             std::clamp(res.prob_floor_literal, 0.0, 1.0),
                             res.joint_holding_freq, res.pass,
                             {{"lambda", lambda},
                              {"l1_bound", res.l1_bound},
                              {"risk_bound", res.risk_bound},
                              {"l1_violation_rate", res.l1_violation_rate},
                              {"risk_violation_rate", res.risk_violation_rate},
                              {"prob_floor_literal", res.prob_floor_literal},
                              {"prob_floor_alternative",
                               res.prob_floor_alternative}});
        } else {
            throw CLI::ValidationError("--theorem must be 4 or 5");
        }

        if (opt.phase_diagram) {
            std::ofstream csv(opt.phase_csv);
            csv.precision(17);
            csv << "n,lambda,empirical_sign_error,bound_eq13\n";
            for (double nd : parse_grid(opt.phase_ns)) {
                const auto prob_n =
                    make_lasso_problem(opt, static_cast<Eigen::Index>(nd));
                const auto d = lasso::consistency_diagnostics(prob_n, opt.seed);
                for (double frac : parse_grid(opt.phase_fracs)) {
                    const double lambda = frac * std::min(d.cap_mu, d.cap_eta);
                    const auto res =
                        lasso::theorem4_check(prob_n, lambda, opt.reps, opt.seed);
                    csv << nd << ',' << lambda << ',' << res.sign_error_rate
                        << ',' << res.bound_eq13 << '\n';
                }
            }
        }
    } catch (const PremiseError& e) {
        report.add_check("premise", false, 0.0, 0.0, true,
                         {{"message", e.what()}});
    }
    return report.finish(opt.out);
}

// ----------------------------------------------------------------- concentration

struct ConcentrationOptions {
    std::string which = "prop4";
    Eigen::Index n = 50;
    Eigen::Index p = 5;
    int draws = 100000;
    std::uint64_t seed = 1;
    double lambda = 0.1;
    std::string u_grid = "0.5,1,2,4";
    std::string noise = "bernoulli";
    std::string out = "concentration_report.json";
    std::string tail_csv = "concentration_tails.csv";
};

void write_tail_csv(const std::string& path,
                    const std::vector<concentration::TailPoint>& points) {
    std::ofstream out(path);
    out.precision(17);
    out << "u,empirical,bound\n";
    for (const auto& pt : points) {
        out << pt.u << ',' << pt.empirical_tail << ',' << pt.bound << '\n';
    }
}

int run_concentration(const ConcentrationOptions& opt) {
    Report report("concentration",
                  {{"which", opt.which},
                   {"n", opt.n},
                   {"p", opt.p},
                   {"draws", opt.draws},
                   {"seed", opt.seed},
                   {"lambda", opt.lambda},
                   {"u_grid", opt.u_grid},
                   {"noise", opt.noise}});
    const auto grid = parse_grid(opt.u_grid);

    if (opt.which == "prop4") {
        auto rng = substream(opt.seed, 7);
        concentration::QuadFormInstance inst;
        inst.Y.resize(opt.n, opt.p);
        for (Eigen::Index i = 0; i < opt.n; ++i) {
            for (Eigen::Index j = 0; j < opt.p; ++j) inst.Y(i, j) = normal(rng);
        }
        inst.b = inst.Y.rowwise().norm().maxCoeff();
        VectorXd prob(opt.n);
        for (Eigen::Index i = 0; i < opt.n; ++i) {
            prob(i) = 0.3 + 0.4 * uniform01(rng);
        }
        inst.sigma = (prob.array() * (1.0 - prob.array())).sqrt();
        const auto sampler = opt.noise == "rademacher"
                                 ? concentration::rademacher_noise(inst)
                                 : concentration::centered_bernoulli_noise(prob);
        const auto rep =
            concentration::tail_check(inst, sampler, grid, opt.draws, opt.seed);
        for (const auto& pt : rep.points) {
            report.add_check("prop4_u_" + std::to_string(pt.u), true,
                             pt.empirical_tail, pt.ceiling, pt.pass,
                             {{"bound", pt.bound}, {"threshold", pt.threshold}});
        }
        report.add_check("mean_matches_trace", true,
                         std::abs(rep.mean_quadform - rep.trace_S),
                         4.0 * rep.mean_se,
                         std::abs(rep.mean_quadform - rep.trace_S) <=
                             4.0 * rep.mean_se);
        write_tail_csv(opt.tail_csv, rep.points);
    } else if (opt.which == "eq19" || opt.which == "eq20") {
        const bool well = opt.which == "eq20";
        datagen::InstanceSpec spec;
        spec.n = opt.n;
        spec.p = opt.p;
        spec.w0_kind = datagen::InstanceSpec::W0::dense;
        spec.w0_norm = 1.0;
        spec.misspecified = !well;
        spec.delta_link = well ? 0.0 : 0.2;
        spec.seed = opt.seed;
        const auto problem = datagen::generate(spec);
        const auto rep = concentration::quadform_tail_check(
            problem, opt.lambda, grid, opt.draws, opt.seed, well);
        for (const auto& pt : rep.points) {
            report.add_check(opt.which + "_u_" + std::to_string(pt.u), true,
                             pt.empirical_tail, pt.ceiling, pt.pass,
                             {{"bound", pt.bound}, {"threshold", pt.threshold}});
        }
        if (well) {
            report.add_check("mean_matches_d1_over_n", true,
                             std::abs(rep.mean_quadform - rep.expected_center),
                             4.0 * rep.mean_se,
                             std::abs(rep.mean_quadform - rep.expected_center) <=
                                 4.0 * rep.mean_se);
        }
        write_tail_csv(opt.tail_csv, rep.points);
    } else if (opt.which == "bernstein") {
        const auto rep = concentration::bernstein_coinflip_check(
            static_cast<int>(opt.n), grid, opt.draws, opt.seed);
        for (const auto& pt : rep.points) {
            report.add_check("bernstein_u_" + std::to_string(pt.u), true,
                             pt.empirical_tail, pt.ceiling, pt.pass,
                             {{"bound", pt.bound}, {"threshold", pt.threshold}});
        }
        write_tail_csv(opt.tail_csv, rep.points);
    } else {
        throw CLI::ValidationError("--which must be prop4, eq19, eq20 or bernstein");
    }
    return report.finish(opt.out);
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("SCORDANT_THREADS")) {
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));
    }

    CLI::App app{"scordant: self-concordant logistic-regression bound checkers"};
    app.require_subcommand(1);

    VerifyBoundsOptions vb;
    auto* vb_cmd = app.add_subcommand(
        "verify-bounds", "deterministic Taylor/Newton inequality suite");
    vb_cmd->add_option("--instances", vb.instances)->check(CLI::PositiveNumber);
    vb_cmd->add_option("--draws", vb.draws)->check(CLI::PositiveNumber);
    vb_cmd->add_option("--seed", vb.seed);
    vb_cmd->add_option("--dims", vb.dims, "\"n,p\"");
    vb_cmd->add_option("--out", vb.out);
    vb_cmd->add_flag("--inject-remainder-fault", vb.inject_fault)
        ->group("");  // hidden test hook

    RidgeOptions ro;
    auto* ridge_cmd = app.add_subcommand("ridge-experiment",
                                         "l2 theorem checkers (1, 2, 3, prop3)");
    ridge_cmd->add_option("--theorem", ro.theorem);
    ridge_cmd->add_option("--reps", ro.reps)->check(CLI::PositiveNumber);
    ridge_cmd->add_option("--delta", ro.delta);
    ridge_cmd->add_option("--v", ro.v);
    ridge_cmd->add_option("--n", ro.n)->check(CLI::PositiveNumber);
    ridge_cmd->add_option("--p", ro.p)->check(CLI::PositiveNumber);
    ridge_cmd->add_option("--seed", ro.seed);
    ridge_cmd->add_option("--lambda", ro.lambda);
    ridge_cmd->add_option("--kappa", ro.kappa);
    ridge_cmd->add_option("--w0-norm", ro.w0_norm);
    ridge_cmd->add_flag("--misspecified", ro.misspecified);
    ridge_cmd->add_option("--out", ro.out);
    ridge_cmd->add_option("--diagnostics-csv", ro.diag_csv);

    LassoOptions lo;
    auto* lasso_cmd =
        app.add_subcommand("lasso-experiment", "l1 theorem checkers (4, 5)");
    lasso_cmd->add_option("--theorem", lo.theorem);
    lasso_cmd->add_option("--reps", lo.reps)->check(CLI::PositiveNumber);
    lasso_cmd->add_option("--n", lo.n)->check(CLI::PositiveNumber);
    lasso_cmd->add_option("--p", lo.p)->check(CLI::PositiveNumber);
    lasso_cmd->add_option("--sparsity", lo.sparsity)->check(CLI::PositiveNumber);
    lasso_cmd->add_option("--amplitude", lo.amplitude);
    lasso_cmd->add_option("--lambda-frac", lo.lambda_frac);
    lasso_cmd->add_option("--seed", lo.seed);
    lasso_cmd->add_flag("--phase-diagram", lo.phase_diagram);
    lasso_cmd->add_option("--phase-ns", lo.phase_ns);
    lasso_cmd->add_option("--phase-fracs", lo.phase_fracs);
    lasso_cmd->add_option("--out", lo.out);
    lasso_cmd->add_option("--phase-csv", lo.phase_csv);

    ConcentrationOptions co;
    auto* conc_cmd = app.add_subcommand(
        "concentration", "tail-bound checkers (prop4, eq19, eq20, bernstein)");
    conc_cmd->add_option("--which", co.which);
    conc_cmd->add_option("--n", co.n)->check(CLI::PositiveNumber);
    conc_cmd->add_option("--p", co.p)->check(CLI::PositiveNumber);
    conc_cmd->add_option("--draws", co.draws)->check(CLI::PositiveNumber);
    conc_cmd->add_option("--seed", co.seed);
    conc_cmd->add_option("--lambda", co.lambda);
    conc_cmd->add_option("--u-grid", co.u_grid);
    conc_cmd->add_option("--noise", co.noise);
    conc_cmd->add_option("--out", co.out);
    conc_cmd->add_option("--tail-csv", co.tail_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (vb_cmd->parsed()) return run_verify_bounds(vb);
        if (ridge_cmd->parsed()) return run_ridge(ro);
        if (lasso_cmd->parsed()) return run_lasso(lo);
        if (conc_cmd->parsed()) return run_concentration(co);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PremiseError& e) {
        std::cerr << "premise not met: " << e.what() << '\n';
        return kExitPremise;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitUsage;
}
