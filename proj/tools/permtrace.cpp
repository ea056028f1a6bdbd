// permtrace: command line front end for the exact, asymptotic, approximation
// and Monte Carlo pipelines. Every output carries the run configuration.

#include "permtrace/approximation.hpp"
#include "permtrace/asymptotics.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/exact_expectations.hpp"
#include "permtrace/limit_model.hpp"
#include "permtrace/poly_json.hpp"
#include "permtrace/simulation.hpp"
#include "permtrace/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

using nlohmann::json;
using namespace permtrace;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kBudget = 3, kConvergence = 4, kAssertion = 5 };

class AssertionFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // shared
    int d = 0;
    std::string poly = "adjacency";
    std::string poly_file;
    std::string h = "x";
    std::string out;
    std::string csv;
    std::uint64_t seed = 0;
    int workers = 1;
    // expect-word
    std::string word;
    int at = 0;
    bool symbolic = false;
    bool brute_force = false;
    // moments, nu, support
    int pmax = 6;
    int order = 1;
    std::string route = "both";
    std::string functional = "nu1";
    std::string normalizer;
    double target = std::numeric_limits<double>::quiet_NaN();
    // approximation
    std::string K = "1";
    double a = 1;
    int m = 1;
    std::string rational_word;
    double rho = 0, eps = 0.5, Kd = 4, beta = std::numeric_limits<double>::infinity();
    int samples = 0;
    double N = 1e6;
    double C = 1;
    // simulation
    int Nsim = 2000;
    int trials = 100;
    int stair_trials = 20;
    int stair_m = 2;
    int probe_trials = 0;
    int tf_m = 8;
    double window = 0.1;
    std::string n_grid = "50,100,200,400,800";
};

json rationals_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

json poly_coeffs_json(const QPoly& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_string(c));
    if (a.empty()) a.push_back("0");
    return a;
}

json rational_function_json(const RationalFunctionQ& f) {
    json factors = json::array();
    for (const auto& [c, mult] : f.denominator_factors()) factors.push_back({{"root_j", to_string(c)}, {"multiplicity", mult}});
    return {{"numerator", poly_coeffs_json(f.numerator())},
            {"denominator", poly_coeffs_json(f.denominator())},
            {"denominator_factors", factors},
            {"text", f.to_string()}};
}

json gaussian_json(const GaussianRational& z) { return to_string(z); }

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw PreconditionError("malformed integer list '" + s + "'");
        }
    }
    return out;
}

class Runner {
public:
    Runner(Options& o, json config) : o_(o), config_(std::move(config)), budget_(Budget::from_env()) {}

    NCPolynomial polynomial() const {
        if (!o_.poly_file.empty()) {
            std::ifstream in(o_.poly_file);
            if (!in) throw PreconditionError("cannot read polynomial file " + o_.poly_file);
            std::stringstream buf;
            buf << in.rdbuf();
            return parse_nc_polynomial_json(buf.str(), o_.d);
        }
        return parse_nc_polynomial(o_.poly, o_.d == 0 && o_.poly == "adjacency" ? 2 : o_.d);
    }

    ScalarPolynomial scalar_h() const { return parse_scalar_polynomial(o_.h); }

    void emit(json result, const std::vector<std::string>& csv_header = {},
              const std::vector<std::vector<std::string>>& csv_rows = {}) const {
        result["config"] = config_;
        result["version"] = kVersion;
        std::string csv_path = o_.csv;
        std::string json_path = o_.out;
        if (csv_path.empty() && json_path.size() > 4 && json_path.substr(json_path.size() - 4) == ".csv") {
            csv_path = json_path;
            json_path.clear();
        }
        if (!csv_path.empty() && !csv_header.empty()) {
            std::ofstream f(csv_path);
            if (!f) throw PreconditionError("cannot write " + csv_path);
            f << "# " << config_.dump() << "\n";
            for (std::size_t i = 0; i < csv_header.size(); ++i) f << (i ? "," : "") << csv_header[i];
            f << "\n";
            for (const auto& row : csv_rows) {
                for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
                f << "\n";
            }
            result["csv"] = csv_path;
        }
        const std::string text = result.dump(2) + "\n";
        if (json_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(json_path);
            if (!f) throw PreconditionError("cannot write " + json_path);
            f << text;
        }
    }

    void expect_word() {
        if (o_.word.empty()) throw PreconditionError("expect-word needs --word");
        Word w = parse_word(o_.word, o_.d);
        ExpectationEngine engine(budget_);
        WordExpectation e = engine.word_expectation_detail(w);
        json r;
        r["word"] = to_string(w);
        r["reduced"] = to_string(reduce(w));
        r["core"] = to_string(e.core);
        r["quotient_count"] = e.quotient_count;
        if (o_.symbolic || o_.at == 0) r["symbolic"] = rational_function_json(e.value);
        if (o_.at != 0) {
            if (o_.at < 1) throw PreconditionError("--at must be a positive integer");
            json at;
            at["N"] = o_.at;
            const bool valid = o_.at >= static_cast<int>(e.core.size());
            at["rational_function_exact"] = valid;
            if (valid || !e.value.denominator_factors().count(Rational(o_.at))) {
                Rational v = e.value.eval(Rational(1, o_.at));
                at["rational_function_value"] = to_string(v);
            }
            Rational exact = pattern_sum_expectation(w, o_.at, budget_);
            at["value"] = to_string(exact);
            at["value_double"] = to_double(exact);
            if (o_.brute_force) {
                Rational bf = brute_force_expectation(w, o_.at, budget_);
                at["brute_force"] = to_string(bf);
                if (bf != exact) throw AssertionFailure("brute force disagrees with the pattern sum");
            }
            r["at"] = at;
        }
        emit(r);
    }

    void expect_poly() {
        NCPolynomial P = polynomial();
        ScalarPolynomial h = scalar_h();
        ExpectationEngine engine(budget_);
        RationalFunctionQ psi = engine.polynomial_trace_expectation(P, h);
        json r;
        r["polynomial"] = json::parse(nc_polynomial_to_json(P));
        r["h"] = poly_coeffs_json(h);
        r["psi"] = rational_function_json(psi);
        r["nu"] = rationals_json(taylor_nu(psi, std::max(o_.order, 1)));
        r["distinct_word_classes"] = engine.cache_size();
        if (o_.at > 0) r["at"] = {{"N", o_.at}, {"value", to_string(psi.eval(Rational(1, o_.at)))}};
        emit(r);
    }

    void limit_moments() {
        NCPolynomial P = polynomial();
        NormEstimate est = limit_norm_estimate(P, std::max(1, o_.pmax / 2), budget_);
        LimitMomentSeries s = tau_moments(P, o_.pmax, budget_);
        json r;
        json rows = json::array();
        for (std::size_t p = 0; p < s.values.size(); ++p) rows.push_back({{"p", p}, {"moment", gaussian_json(s.values[p])}});
        r["rows"] = rows;
        r["norm_lower_bound"] = est.lower;
        r["norm_lower_by_p"] = est.lower_by_p;
        r["norm_ratio_estimates"] = est.ratio;
        r["used_square"] = est.used_square;
        r["coefficient_norm_sum"] = P.coefficient_norm_sum();
        emit(r);
    }

    void nu() {
        NCPolynomial P = polynomial();
        const bool adjacency = P == NCPolynomial::adjacency(P.rank());
        const bool taylor = o_.route != "wordcount";
        const bool wordcount = o_.route != "taylor" && o_.order >= 1;
        if (o_.route != "taylor" && o_.route != "wordcount" && o_.route != "both") {
            throw PreconditionError("--route must be taylor, wordcount or both");
        }
        ExpectationEngine engine(budget_);
        json rows = json::array();
        std::vector<std::vector<std::string>> csv;
        bool agree = true;
        for (int p = 1; p <= o_.pmax; ++p) {
            json row;
            row["p"] = p;
            std::vector<std::string> line{std::to_string(p)};
            std::optional<Rational> nu1;
            if (taylor) {
                auto nu = taylor_nu(engine.polynomial_trace_expectation(P, QPoly::monomial(p)), o_.order);
                row["nu"] = rationals_json(nu);
                for (std::size_t i = 0; i < nu.size(); ++i) row["nu" + std::to_string(i)] = to_string(nu[i]);
                if (o_.order >= 1) nu1 = nu[1];
                line.push_back(to_string(nu[0]));
            }
            if (wordcount) {
                GaussianRational wc = adjacency ? GaussianRational{Rational(nu1_adjacency_wordcount(P.rank(), p, budget_)), 0}
                                                : nu1_polynomial_wordcount(P, p, budget_);
                row["nu1_wordcount"] = gaussian_json(wc);
                if (nu1) {
                    bool same = wc.im == 0 && wc.re == *nu1;
                    row["routes_agree"] = same;
                    agree = agree && same;
                }
                if (!nu1 && wc.im == 0) nu1 = wc.re;
            }
            row["route"] = taylor && wordcount ? "both" : (taylor ? "taylor" : "wordcount");
            if (nu1) {
                double norm = 1 + std::pow(p, 2) * std::pow(p + 1, 4);
                double v = std::abs(to_double(*nu1));
                row["nu1"] = to_string(*nu1);
                row["normalized_growth"] = v > 0 ? std::pow(v / norm, 1.0 / p) : 0.0;
                line.push_back(to_string(*nu1));
            }
            rows.push_back(row);
            csv.push_back(line);
        }
        json r;
        r["rows"] = rows;
        r["routes_agree"] = agree;
        emit(r, {"p", "nu0", "nu1"}, csv);
        if (!agree) throw AssertionFailure("taylor and word-count routes disagree");
    }

    void support() {
        NCPolynomial P = polynomial();
        std::vector<double> moments;
        std::string normalizer = o_.normalizer;
        if (o_.functional == "nu0") {
            auto s = tau_moments(P, o_.pmax, budget_);
            for (int p = 1; p <= o_.pmax; ++p) moments.push_back(to_double(s.values[static_cast<std::size_t>(p)].re));
            if (normalizer.empty()) normalizer = "none";
        } else if (o_.functional == "nu1") {
            const bool adjacency = P == NCPolynomial::adjacency(P.rank());
            for (int p = 1; p <= o_.pmax; ++p) {
                moments.push_back(adjacency ? nu1_adjacency_wordcount(P.rank(), p, budget_).get_d()
                                            : to_double(nu1_polynomial_wordcount(P, p, budget_).re));
            }
            if (normalizer.empty()) normalizer = "friedman";
        } else {
            throw PreconditionError("--functional must be nu0 or nu1");
        }
        if (normalizer != "none" && normalizer != "friedman") throw PreconditionError("--normalizer must be none or friedman");
        const double K = P.coefficient_norm_sum();
        const double target = std::isnan(o_.target) ? K : o_.target;
        SupportEstimate est = support_estimate(
            moments, normalizer == "friedman" ? SupportNormalizer::friedman : SupportNormalizer::none, target);
        json r;
        r["moments"] = moments;
        r["normalized"] = est.normalized;
        r["rho_hat"] = est.rho_hat;
        r["max_normalized"] = est.max_normalized;
        r["target"] = est.target;
        r["tolerance"] = est.tolerance;
        r["within_target"] = est.within_target;
        r["K"] = K;
        emit(r);
    }

    void cheb() {
        ScalarPolynomial h = scalar_h();
        Rational K = parse_rational(o_.K);
        if (K <= 0) throw PreconditionError("--K must be positive");
        auto exact = cheb_expand_exact(h, K);
        ChebyshevExpansion e = cheb_expand(h, to_double(K));
        double residual = 0, scale = 1;
        for (int i = 0; i <= 1000; ++i) {
            double x = to_double(K) * (2.0 * i / 1000 - 1);
            double hx = h.eval(x);
            scale = std::max(scale, std::abs(hx));
            residual = std::max(residual, std::abs(hx - e.eval(x)));
        }
        json r;
        r["K"] = to_string(K);
        r["coefficients"] = rationals_json(exact);
        r["coefficients_double"] = e.coeffs;
        r["exact_round_trip"] = cheb_reconstruct_exact(exact, K) == h;
        r["float_round_trip_relative_residual"] = residual / scale;
        emit(r);
    }

    void markov_check() {
        ScalarPolynomial h = scalar_h();
        json r;
        InequalityReport mk = markov_bound_check(h, o_.a, o_.m);
        r["markov"] = {{"lhs", mk.lhs}, {"rhs", mk.rhs}, {"ratio", mk.ratio}, {"holds", mk.holds}};
        const int q = std::max(h.degree(), 1);
        const int n = 4 * q * q;
        std::vector<double> pts;
        for (int i = 0; i <= n; ++i) pts.push_back(o_.a * i / n);
        InequalityReport ip = interpolation_check(h, o_.a, pts);
        r["interpolation"] = {{"lhs", ip.lhs}, {"rhs", ip.rhs}, {"ratio", ip.ratio}, {"holds", ip.holds}, {"points", pts.size()}};
        bool ok = mk.holds && ip.holds;
        if (!o_.rational_word.empty()) {
            ExpectationEngine engine(budget_);
            RationalFunctionQ rf = engine.word_expectation(parse_word(o_.rational_word, o_.d));
            RationalMarkovReport rm = rational_markov_check(rf, o_.a, o_.m);
            r["rational_markov"] = {{"function", rf.to_string()}, {"c", rm.c}, {"q", rm.q}, {"lhs", rm.lhs},
                                    {"rhs", rm.rhs}, {"ratio", rm.ratio}, {"holds", rm.holds}};
            ok = ok && rm.holds;
        }
        r["holds"] = ok;
        emit(r);
        if (!ok) throw AssertionFailure("Markov-type inequality violated");
    }

    void testfn() {
        TestFunction tf(o_.rho, o_.eps, o_.Kd, o_.tf_m);
        json r;
        r["delta"] = tf.delta();
        r["phi"] = tf.phi();
        r["chi_inner_edge"] = tf.chi(o_.rho + o_.eps / 2);
        r["chi_outer_edge"] = tf.chi(o_.rho + o_.eps);
        r["top_derivative_order"] = o_.tf_m + 1;
        r["top_derivative_norm_inf"] = tf.top_derivative_norm(std::numeric_limits<double>::infinity());
        if (!std::isinf(o_.beta)) {
            r["beta"] = o_.beta;
            r["top_derivative_norm_beta"] = tf.top_derivative_norm(o_.beta);
        }
        r["fitted_constant"] = tf.fitted_constant();
        std::vector<std::vector<std::string>> csv;
        for (int i = 0; i < o_.samples; ++i) {
            double x = -o_.Kd + 2 * o_.Kd * i / std::max(1, o_.samples - 1);
            std::ostringstream xs, cs;
            xs.precision(17);
            cs.precision(17);
            xs << x;
            cs << tf.chi(x);
            csv.push_back({xs.str(), cs.str()});
        }
        emit(r, {"x", "chi"}, csv);
    }

    void certificate() {
        if (o_.d < 1) throw PreconditionError("certificate needs --d >= 1");
        TailCertificate c = friedman_certificate(o_.d, o_.eps, o_.N, o_.C);
        json r = {{"d", c.d},
                  {"eps", c.eps},
                  {"N", c.N},
                  {"m", c.m},
                  {"K", c.K},
                  {"rho", c.rho},
                  {"beta_star", c.beta_star},
                  {"beta", c.beta},
                  {"delta", c.delta},
                  {"derivative_norm", c.derivative_norm},
                  {"master_constant", c.master_constant},
                  {"universal_constant", c.universal_constant},
                  {"trace_bound", c.trace_bound},
                  {"bound", c.bound},
                  {"up_to_universal_constant", c.up_to_universal_constant}};
        emit(r);
    }

    void simulate() {
        if (o_.d < 1) throw PreconditionError("simulate needs --d >= 1");
        TailReport t = tail_experiment(o_.d, o_.Nsim, o_.eps, o_.trials, o_.seed, o_.workers);
        json r = {{"threshold", t.threshold},       {"exceed", t.exceed},         {"fraction", t.fraction},
                  {"wilson_95", {t.ci.lo, t.ci.hi}}, {"norm_exceed", t.norm_exceed}, {"norm_fraction", t.norm_fraction},
                  {"median_lambda2", t.median},      {"q05_lambda2", t.q05},       {"q95_lambda2", t.q95},
                  {"kesten", kesten_norm(o_.d)}};
        std::vector<std::vector<std::string>> csv;
        for (const auto& row : t.rows) {
            csv.push_back({std::to_string(row.trial), json(row.lambda2).dump(), json(row.lambda_min).dump(),
                           json(row.norm).dump(), std::to_string(row.iterations)});
        }
        if (o_.out.empty() && o_.csv.empty()) {
            json rows = json::array();
            for (const auto& row : t.rows) rows.push_back({{"trial", row.trial}, {"lambda2", row.lambda2}, {"lambda_min", row.lambda_min}, {"norm", row.norm}});
            r["rows"] = rows;
        }
        emit(r, {"trial", "lambda2", "lambda_min", "norm", "iterations"}, csv);
    }

    void staircase() {
        if (o_.d < 1) throw PreconditionError("staircase needs --d >= 1");
        StaircaseReport s = staircase_experiment(o_.d, o_.Nsim, o_.stair_m, o_.stair_trials, o_.seed, o_.workers, o_.window);
        json series = json::array();
        for (int m = 1; m <= o_.d; ++m) {
            const bool outlier = 2.0 * m - 1 > std::sqrt(2.0 * o_.d - 1);
            series.push_back({{"m", m}, {"rho_m", outlier ? staircase_rho(o_.d, m) : kesten_norm(o_.d)}, {"outlier_regime", outlier}});
        }
        json r = {{"rho_m", s.rho_m},
                  {"degenerate", s.degenerate},
                  {"window", s.window},
                  {"planted_hits", s.planted_hits},
                  {"control_hits", s.control_hits},
                  {"planted_top", s.planted_top},
                  {"control_top", s.control_top},
                  {"rho_series", series}};
        std::vector<std::vector<std::string>> csv;
        for (int t = 0; t < s.trials; ++t) {
            csv.push_back({std::to_string(t), json(s.planted_top[static_cast<std::size_t>(t)]).dump(),
                           json(s.control_top[static_cast<std::size_t>(t)]).dump()});
        }
        emit(r, {"trial", "planted_top", "control_top"}, csv);
    }

    void weak_probe() {
        NCPolynomial P = polynomial();
        ScalarPolynomial h = scalar_h();
        ExpectationEngine engine(budget_);
        WeakProbeReport w = weak_convergence_probe(engine, P, h, parse_int_list(o_.n_grid), o_.probe_trials, o_.seed, o_.workers);
        json rows = json::array();
        std::vector<std::vector<std::string>> csv;
        for (const auto& row : w.rows) {
            json jr = {{"N", row.N}, {"exact", to_string(row.exact)}, {"residual", to_string(row.residual)},
                       {"residual_double", to_double(row.residual)}};
            if (row.mc_trials > 0) {
                jr["mc_mean"] = row.mc_mean;
                jr["mc_stderr"] = row.mc_stderr;
                jr["mc_z"] = row.z;
            }
            rows.push_back(jr);
            csv.push_back({std::to_string(row.N), to_string(row.exact), json(to_double(row.residual)).dump()});
        }
        json r = {{"psi", rational_function_json(w.psi)},
                  {"nu0", to_string(w.nu0)},
                  {"nu1", to_string(w.nu1)},
                  {"rows", rows},
                  {"residual_identically_zero", w.residual_identically_zero}};
        if (!w.residual_identically_zero) r["slope"] = w.slope;
        emit(r, {"N", "exact", "residual"}, csv);
    }

    void selftest() {
        json checks = json::array();
        bool ok = true;
        auto check = [&](const std::string& name, bool pass) {
            checks.push_back({{"check", name}, {"pass", pass}});
            ok = ok && pass;
        };
        ExpectationEngine engine(budget_);
        bool oracle = true;
        for (const char* s : {"aa", "abAB", "aab", "abab", "aaBB"}) {
            Word w = parse_word(s, 2);
            RationalFunctionQ f = engine.word_expectation(w);
            for (int n = static_cast<int>(w.size()); n <= 5; ++n) oracle = oracle && f.eval(Rational(1, n)) == brute_force_expectation(w, n, budget_);
        }
        check("word expectations match brute force for N >= |w|", oracle);
        bool routes = true;
        const NCPolynomial A = NCPolynomial::adjacency(2);
        for (int p = 1; p <= 5; ++p) {
            auto nu = taylor_nu(engine.polynomial_trace_expectation(A, QPoly::monomial(p)), 1);
            routes = routes && Rational(nu1_adjacency_wordcount(2, p, budget_)) == nu[1];
        }
        check("nu_1 taylor route equals word-count route (d=2, p<=5)", routes);
        auto c4 = friedman_certificate(2, 0.5, 1e4), c5 = friedman_certificate(2, 0.5, 1e5);
        check("certificate scales as 1/N", std::abs(c4.bound / c5.bound - 10) < 0.1);
        SparsePermOperator op(A, sample_tuple(40, 2, o_.seed, 0));
        auto dense = dense_projected_eigenvalues(op);
        auto lz = extreme_eigs(op, 1);
        check("Lanczos matches dense eigensolver (N=40)", std::abs(lz.top[0] - dense.back()) < 1e-8 && std::abs(lz.bottom[0] - dense.front()) < 1e-8);
        json r = {{"checks", checks}, {"pass", ok}};
        emit(r);
        if (!ok) throw AssertionFailure("selftest failed");
    }

private:
    Options& o_;
    json config_;
    Budget budget_;
};

json option_values(const CLI::App* sub) {
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name.empty()) continue;
        if (opt->count() > 0) {
            auto res = opt->results();
            params[name] = res.size() == 1 ? json(res[0]) : json(res);
        } else if (!opt->get_default_str().empty()) {
            params[name] = opt->get_default_str();
        }
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact expected traces, asymptotic functionals and spectral experiments for random permutation matrices"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;

    const char* env_seed = std::getenv("SEED");
    if (env_seed && *env_seed) o.seed = std::strtoull(env_seed, nullptr, 10);

    auto common = [&](CLI::App* s) {
        s->add_option("--d", o.d, "Rank (number of free generators); 0 infers it");
        s->add_option("--out", o.out, "Output path (JSON, or CSV when it ends in .csv); stdout by default");
        s->add_option("--csv", o.csv, "CSV path for series output");
    };
    auto poly_opts = [&](CLI::App* s) {
        s->add_option("--poly", o.poly, "Polynomial in text form, e.g. 'a+A+b+B' or 'adjacency'")->capture_default_str();
        s->add_option("--poly-file", o.poly_file, "Polynomial in JSON form");
    };
    auto sim_opts = [&](CLI::App* s, int& trials) {
        s->add_option("--seed", o.seed, "Master seed (default: SEED or 0)");
        s->add_option("--workers", o.workers, "Worker threads (default: WORKERS or 1)");
        s->add_option("--trials", trials, "Number of trials")->capture_default_str();
    };

    std::map<std::string, std::function<void(Runner&)>> actions;

    auto* ew = app.add_subcommand("expect-word", "Exact E[tr_N w(S^N)] as a rational function of x = 1/N");
    common(ew);
    ew->add_option("--word", o.word, "Word, e.g. abAB (uppercase = inverse, 1 = identity)")->required();
    ew->add_option("--at", o.at, "Evaluate exactly at this N");
    ew->add_flag("--symbolic", o.symbolic, "Include the symbolic rational function");
    ew->add_flag("--brute-force", o.brute_force, "With --at, also average over all permutation tuples");
    actions["expect-word"] = [](Runner& r) { r.expect_word(); };

    auto* ep = app.add_subcommand("expect-poly", "Exact Psi_h with E tr h(P) = Psi_h(1/N)");
    common(ep);
    poly_opts(ep);
    ep->add_option("--test-poly", o.h, "Scalar test polynomial h: '0,0,1' or 'x^2 - 1'")->capture_default_str();
    ep->add_option("--at", o.at, "Evaluate exactly at this N");
    ep->add_option("--order", o.order, "Taylor order for nu")->capture_default_str();
    actions["expect-poly"] = [](Runner& r) { r.expect_poly(); };

    auto* lm = app.add_subcommand("limit-moments", "Moments and norm estimates of P in the limiting model");
    common(lm);
    poly_opts(lm);
    lm->add_option("--pmax", o.pmax, "Largest moment")->capture_default_str();
    actions["limit-moments"] = [](Runner& r) { r.limit_moments(); };

    auto* nu = app.add_subcommand("nu", "Taylor functionals nu_0..nu_m of x^p");
    common(nu);
    poly_opts(nu);
    nu->add_option("--order", o.order, "Highest functional")->capture_default_str();
    nu->add_option("--pmax", o.pmax, "Largest power p")->capture_default_str();
    nu->add_option("--route", o.route, "taylor, wordcount or both")->capture_default_str();
    actions["nu"] = [](Runner& r) { r.nu(); };

    auto* su = app.add_subcommand("support", "Moment-growth support estimate");
    common(su);
    poly_opts(su);
    su->add_option("--pmax", o.pmax, "Largest power p")->capture_default_str();
    su->add_option("--functional", o.functional, "nu0 or nu1")->capture_default_str();
    su->add_option("--normalizer", o.normalizer, "none or friedman");
    su->add_option("--target", o.target, "Support radius to compare against (default: sum of coefficient norms)");
    actions["support"] = [](Runner& r) { r.support(); };

    auto* ch = app.add_subcommand("cheb", "Chebyshev coefficients of h on [-K, K]");
    common(ch);
    ch->add_option("--poly", o.h, "Scalar polynomial, e.g. 'x^2 - 1' or '0,0,1'")->capture_default_str();
    ch->add_option("--K", o.K, "Half-width (rational)")->capture_default_str();
    actions["cheb"] = [](Runner& r) { r.cheb(); };

    auto* mc = app.add_subcommand("markov-check", "Markov, interpolation and rational Markov inequalities on [0, a]");
    common(mc);
    mc->add_option("--poly", o.h, "Scalar polynomial")->capture_default_str();
    mc->add_option("--a", o.a, "Interval length")->capture_default_str();
    mc->add_option("--m", o.m, "Derivative order")->capture_default_str();
    mc->add_option("--rational-word", o.rational_word, "Also check the expectation of this word as a rational function");
    actions["markov-check"] = [](Runner& r) { r.markov_check(); };

    auto* tf = app.add_subcommand("testfn", "Smooth 0/1 test function and its derivative norms");
    common(tf);
    tf->add_option("--rho", o.rho, "Inner radius")->required();
    tf->add_option("--eps", o.eps, "Transition width")->capture_default_str();
    tf->add_option("--K", o.Kd, "Outer radius")->capture_default_str();
    tf->add_option("--m", o.tf_m, "Smoothness order")->capture_default_str();
    tf->add_option("--beta", o.beta, "L^beta exponent (default inf)");
    tf->add_option("--samples", o.samples, "Number of chi samples written as CSV")->capture_default_str();
    actions["testfn"] = [](Runner& r) { r.testfn(); };

    auto* ce = app.add_subcommand("certificate", "Tail bound P[||A^N|| >= 2 sqrt(2d-1) + eps] up to a universal constant");
    common(ce);
    ce->add_option("--eps", o.eps, "Margin above the Kesten norm")->capture_default_str();
    ce->add_option("--N", o.N, "Matrix dimension")->capture_default_str();
    ce->add_option("--C", o.C, "Universal constant")->capture_default_str();
    actions["certificate"] = [](Runner& r) { r.certificate(); };

    auto* si = app.add_subcommand("simulate", "Empirical tail of lambda_2 for random 2d-regular graphs");
    common(si);
    sim_opts(si, o.trials);
    si->add_option("--N", o.Nsim, "Number of vertices")->capture_default_str();
    si->add_option("--eps", o.eps, "Margin above the Kesten norm")->capture_default_str();
    actions["simulate"] = [](Runner& r) { r.simulate(); };

    auto* st = app.add_subcommand("staircase", "Planted-tangle outliers near rho_m");
    common(st);
    sim_opts(st, o.stair_trials);
    st->add_option("--N", o.Nsim, "Number of vertices")->capture_default_str();
    st->add_option("--m", o.stair_m, "Number of self-loops at the planted vertex")->capture_default_str();
    st->add_option("--window", o.window, "Hit window around rho_m")->capture_default_str();
    actions["staircase"] = [](Runner& r) { r.staircase(); };

    auto* wp = app.add_subcommand("weak-probe", "Exact and Monte Carlo residuals of the first-order expansion");
    common(wp);
    poly_opts(wp);
    sim_opts(wp, o.probe_trials);
    wp->add_option("--test-poly", o.h, "Scalar test polynomial h")->capture_default_str();
    wp->add_option("--N-grid", o.n_grid, "Comma separated N values")->capture_default_str();
    actions["weak-probe"] = [](Runner& r) { r.weak_probe(); };

    auto* sf = app.add_subcommand("selftest", "Quick internal consistency checks");
    common(sf);
    sf->add_option("--seed", o.seed, "Seed for the eigensolver check");
    actions["selftest"] = [](Runner& r) { r.selftest(); };

    try {
        o.workers = workers_from_env();
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    Budget b = Budget::from_env();
    json config = {{"subcommand", sub->get_name()},
                   {"params", option_values(sub)},
                   {"seed", o.seed},
                   {"workers", o.workers},
                   {"budgets",
                    {{"expansion", b.max_expansion_products},
                     {"word_length", b.max_word_length},
                     {"group_vector", b.max_group_vector},
                     {"brute_force", b.max_brute_force_tuples}}},
                   {"version", kVersion}};
    try {
        Runner runner(o, config);
        actions.at(sub->get_name())(runner);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kConvergence;
    } catch (const AssertionFailure& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return kAssertion;
    } catch (const InternalError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return kAssertion;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
