// Python bindings. Exact values cross the boundary as "p/q" strings and are
// turned into fractions.Fraction by the package wrapper.

#include "permtrace/approximation.hpp"
#include "permtrace/asymptotics.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/exact_expectations.hpp"
#include "permtrace/free_group.hpp"
#include "permtrace/limit_model.hpp"
#include "permtrace/nc_poly.hpp"
#include "permtrace/simulation.hpp"
#include "permtrace/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace permtrace;

namespace {

std::vector<std::string> strings(std::span<const Rational> v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(to_string(r));
    return out;
}

py::dict rf_dict(const RationalFunctionQ& r) {
    py::dict d;
    d["numerator"] = strings(r.numerator().coeffs());
    d["denominator"] = strings(r.denominator().coeffs());
    py::list factors;
    for (const auto& [c, mult] : r.denominator_factors()) factors.append(py::make_tuple(to_string(c), mult));
    d["denominator_factors"] = factors;
    d["text"] = r.to_string();
    return d;
}

ScalarPolynomial scalar_poly(const py::object& h) {
    if (py::isinstance<py::str>(h)) return parse_scalar_polynomial(h.cast<std::string>());
    std::vector<Rational> coeffs;
    for (const auto& c : h) coeffs.push_back(parse_rational(py::str(c).cast<std::string>()));
    return QPoly(std::move(coeffs));
}

std::string gaussian_text(const GaussianRational& z) { return to_string(z); }

}  // namespace

PYBIND11_MODULE(_permtrace, m) {
    m.doc() = "Exact and simulated spectra of random permutation models";
    m.attr("__version__") = kVersion;

    static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
    static py::exception<BudgetError> budget(m, "BudgetError", PyExc_RuntimeError);
    static py::exception<ConvergenceError> convergence(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PreconditionError& e) {
            py::set_error(precondition, e.what());
        } catch (const BudgetError& e) {
            py::set_error(budget, e.what());
        } catch (const ConvergenceError& e) {
            py::set_error(convergence, e.what());
        }
    });

    m.def("reduce_word", [](const std::string& w) { return to_string(reduce(parse_word(w))); });
    m.def("cyclic_reduce", [](const std::string& w) {
        auto c = cyclic_reduce(reduce(parse_word(w)));
        return py::make_tuple(to_string(c.conjugator), to_string(c.core));
    });
    m.def("power_decompose", [](const std::string& w) {
        auto p = power_decompose(reduce(parse_word(w)));
        return py::make_tuple(to_string(p.base), p.exponent);
    });
    m.def("is_first_visit", [](const std::string& w, const std::string& v) {
        return is_first_visit(parse_word(w), reduce(parse_word(v)));
    });

    m.def(
        "word_expectation",
        [](const std::string& w) {
            ExpectationEngine engine(Budget::from_env());
            return rf_dict(engine.word_expectation(parse_word(w)));
        },
        py::arg("word"));
    m.def(
        "word_expectation_at",
        [](const std::string& w, int N) {
            ExpectationEngine engine(Budget::from_env());
            return to_string(engine.word_expectation(parse_word(w)).eval(Rational(1) / N));
        },
        py::arg("word"), py::arg("N"));
    m.def(
        "pattern_sum_expectation",
        [](const std::string& w, int N) { return to_string(pattern_sum_expectation(parse_word(w), N, Budget::from_env())); },
        py::arg("word"), py::arg("N"));
    m.def(
        "brute_force_expectation",
        [](const std::string& w, int N) { return to_string(brute_force_expectation(parse_word(w), N, Budget::from_env())); },
        py::arg("word"), py::arg("N"));
    m.def(
        "polynomial_trace_expectation",
        [](const std::string& poly, const py::object& h, int d) {
            ExpectationEngine engine(Budget::from_env());
            return rf_dict(engine.polynomial_trace_expectation(parse_nc_polynomial(poly, d), scalar_poly(h)));
        },
        py::arg("poly"), py::arg("h"), py::arg("d") = 0);
    m.def(
        "nu",
        [](const std::string& poly, const py::object& h, int order, int d) {
            ExpectationEngine engine(Budget::from_env());
            return strings(taylor_nu(engine.polynomial_trace_expectation(parse_nc_polynomial(poly, d), scalar_poly(h)), order));
        },
        py::arg("poly"), py::arg("h"), py::arg("order") = 1, py::arg("d") = 0);
    m.def(
        "nu1_adjacency_wordcount", [](int d, int p) { return nu1_adjacency_wordcount(d, p, Budget::from_env()).get_str(); },
        py::arg("d"), py::arg("p"));
    m.def(
        "tau_moment",
        [](const std::string& poly, int p, int d) {
            return gaussian_text(tau_moment(parse_nc_polynomial(poly, d), p, Budget::from_env()));
        },
        py::arg("poly"), py::arg("p"), py::arg("d") = 0);
    m.def("kesten_norm", &kesten_norm, py::arg("d"));
    m.def("master_constant", &master_constant, py::arg("q"), py::arg("q0"), py::arg("d"), py::arg("m"));
    m.def(
        "master_inequality",
        [](const std::string& poly, const py::object& h, int N, int m, int d) {
            ExpectationEngine engine(Budget::from_env());
            auto r = verify_master_inequality(engine, parse_nc_polynomial(poly, d), scalar_poly(h), N, m);
            py::dict out;
            out["lhs"] = to_string(r.lhs);
            out["rhs"] = r.rhs;
            out["holds"] = r.holds;
            out["sup_norm"] = r.sup_norm;
            out["K"] = r.K;
            return out;
        },
        py::arg("poly"), py::arg("h"), py::arg("N"), py::arg("m"), py::arg("d") = 0);

    m.def(
        "cheb_expand", [](const py::object& h, double K) { return cheb_expand(scalar_poly(h), K).coeffs; }, py::arg("h"),
        py::arg("K"));
    m.def(
        "markov_ratio", [](const py::object& h, double a, int m) { return markov_bound_check(scalar_poly(h), a, m).ratio; },
        py::arg("h"), py::arg("a"), py::arg("m") = 1);
    m.def(
        "mapped_chebyshev", [](int q, const std::string& a) { return strings(mapped_chebyshev(q, parse_rational(a)).coeffs()); },
        py::arg("q"), py::arg("a") = "1");
    m.def(
        "test_function",
        [](double rho, double eps, double K, int m, const std::vector<double>& xs) {
            TestFunction tf(rho, eps, K, m);
            std::vector<double> out;
            for (double x : xs) out.push_back(tf.chi(x));
            return out;
        },
        py::arg("rho"), py::arg("eps"), py::arg("K"), py::arg("m"), py::arg("xs"));
    m.def(
        "friedman_certificate",
        [](int d, double eps, double N) {
            auto c = friedman_certificate(d, eps, N);
            py::dict out;
            out["bound"] = c.bound;
            out["trace_bound"] = c.trace_bound;
            out["m"] = c.m;
            out["K"] = c.K;
            out["derivative_norm"] = c.derivative_norm;
            out["up_to_universal_constant"] = c.up_to_universal_constant;
            return out;
        },
        py::arg("d"), py::arg("eps"), py::arg("N"));

    m.def(
        "sample_tuple", [](int N, int d, std::uint64_t seed, std::uint64_t trial) { return sample_tuple(N, d, seed, trial).perms; },
        py::arg("N"), py::arg("d"), py::arg("seed"), py::arg("trial") = 0);
    m.def(
        "tail_experiment",
        [](int d, int N, double eps, int trials, std::uint64_t seed, int workers) {
            TailReport r;
            {
                py::gil_scoped_release release;
                r = tail_experiment(d, N, eps, trials, seed, workers);
            }
            py::dict out;
            std::vector<double> l2;
            for (const auto& row : r.rows) l2.push_back(row.lambda2);
            out["lambda2"] = l2;
            out["median"] = r.median;
            out["fraction"] = r.fraction;
            out["threshold"] = r.threshold;
            out["ci"] = py::make_tuple(r.ci.lo, r.ci.hi);
            return out;
        },
        py::arg("d"), py::arg("N"), py::arg("eps"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "staircase_experiment",
        [](int d, int N, int m_, int trials, std::uint64_t seed, int workers) {
            StaircaseReport r;
            {
                py::gil_scoped_release release;
                r = staircase_experiment(d, N, m_, trials, seed, workers);
            }
            py::dict out;
            out["rho_m"] = r.rho_m;
            out["planted_top"] = r.planted_top;
            out["control_top"] = r.control_top;
            out["planted_hits"] = r.planted_hits;
            out["control_hits"] = r.control_hits;
            return out;
        },
        py::arg("d"), py::arg("N"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 1);
}
