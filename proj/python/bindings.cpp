#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "marketeq/appendix.hpp"
#include "marketeq/equilibrium.hpp"
#include "marketeq/json_io.hpp"
#include "marketeq/montecarlo.hpp"
#include "marketeq/order_statistics.hpp"
#include "marketeq/policy.hpp"
#include "marketeq/star.hpp"

namespace py = pybind11;
using namespace marketeq;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            py::dict d;
            for (const auto& [key, value] : j.items()) d[py::str(key)] = json_to_py(value);
            return d;
        }
        case nlohmann::json::value_t::array: {
            py::list l;
            for (const auto& value : j) l.append(json_to_py(value));
            return l;
        }
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        default: return py::none();
    }
}

std::optional<Distribution> optional_dist(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    return make_distribution(spec);
}

}  // namespace

PYBIND11_MODULE(_marketeq, m) {
    m.doc() = "Price equilibria and entry-policy comparisons in mandatory-purchase markets";

    py::register_exception<InvalidSpecError>(m, "InvalidSpecError");
    py::register_exception<InvalidParameterError>(m, "InvalidParameterError");
    py::register_exception<UndefinedValueError>(m, "UndefinedValueError");
    py::register_exception<NumericFailure>(m, "NumericFailure");

    py::class_<NumericConfig>(m, "NumericConfig")
        .def(py::init<>())
        .def_readwrite("quad_abs_tol", &NumericConfig::quad_abs_tol)
        .def_readwrite("quad_rel_tol", &NumericConfig::quad_rel_tol)
        .def_readwrite("grid_points", &NumericConfig::grid_points)
        .def_readwrite("eq_tolerance", &NumericConfig::eq_tolerance)
        .def_readwrite("rev_tolerance", &NumericConfig::rev_tolerance)
        .def_readwrite("fp_tolerance", &NumericConfig::fp_tolerance)
        .def_readwrite("max_iterations", &NumericConfig::max_iterations)
        .def_readwrite("consistency_band", &NumericConfig::consistency_band)
        .def_readwrite("mc_samples", &NumericConfig::mc_samples)
        .def_readwrite("seed", &NumericConfig::seed)
        .def_readwrite("truncation_quantile", &NumericConfig::truncation_quantile);

    py::class_<Distribution>(m, "Distribution")
        .def("cdf", &Distribution::cdf)
        .def("survival", &Distribution::survival)
        .def("pdf", &Distribution::pdf)
        .def("pdf_prime", &Distribution::pdf_prime)
        .def("quantile", &Distribution::quantile)
        .def("hazard", &Distribution::hazard)
        .def("sample", &Distribution::sample)
        .def("support_lo", &Distribution::support_lo)
        .def("support_hi", &Distribution::support_hi)
        .def("discontinuities", &Distribution::discontinuities)
        .def("spec", &Distribution::spec)
        .def("__repr__", [](const Distribution& d) { return "Distribution(" + d.spec() + ")"; });

    m.def("make_distribution", &make_distribution, py::arg("spec"));
    m.def("virtual_value", &virtual_value, py::arg("dist"), py::arg("v"));
    m.def(
        "virtual_value_inverse_zero",
        [](const Distribution& d, const NumericConfig& cfg) { return virtual_value_inverse_zero(d, cfg); },
        py::arg("dist"), py::arg("cfg") = NumericConfig{});
    m.def(
        "classify",
        [](const Distribution& d, const NumericConfig& cfg) { return json_to_py(to_json(classify(d, cfg), d.spec())); },
        py::arg("dist"), py::arg("cfg") = NumericConfig{});

    m.def(
        "expected_order_stat",
        [](const Distribution& d, int i, int n, const NumericConfig& cfg) {
            return expected_order_stat({d, i, n}, cfg);
        },
        py::arg("dist"), py::arg("i"), py::arg("n"), py::arg("cfg") = NumericConfig{});
    m.def(
        "expected_hazard_order",
        [](const Distribution& d, int i, int n, const NumericConfig& cfg) {
            return expected_hazard_order({d, i, n}, cfg);
        },
        py::arg("dist"), py::arg("i"), py::arg("n"), py::arg("cfg") = NumericConfig{});
    m.def(
        "expected_inverse_hazard_order",
        [](const Distribution& d, int i, int n, const NumericConfig& cfg) {
            return expected_inverse_hazard_order({d, i, n}, cfg);
        },
        py::arg("dist"), py::arg("i"), py::arg("n"), py::arg("cfg") = NumericConfig{});

    py::class_<StarDistribution>(m, "StarDistribution")
        .def(py::init<const Distribution&, int, double, const NumericConfig&>(), py::arg("dist"), py::arg("n"),
             py::arg("peer_price"), py::arg("cfg") = NumericConfig{})
        .def(py::init([](const std::vector<Distribution>& marginals, int provider,
                         const std::vector<double>& peers, const NumericConfig& cfg) {
                 return StarDistribution(marginals, provider, peers, cfg);
             }),
             py::arg("marginals"), py::arg("provider"), py::arg("peer_prices"), py::arg("cfg") = NumericConfig{})
        .def("kernel_g", &StarDistribution::kernel_g, py::arg("q"), py::arg("x"))
        .def("survival", &StarDistribution::survival, py::arg("q"))
        .def("survival_direct", &StarDistribution::survival_direct, py::arg("q"))
        .def("pdf", &StarDistribution::pdf, py::arg("q"))
        .def("pdf_prime", &StarDistribution::pdf_prime, py::arg("q"))
        .def("hazard", &StarDistribution::hazard, py::arg("q"))
        .def("virtual_value", &StarDistribution::virtual_value, py::arg("q"))
        .def(
            "is_mhr",
            [](const StarDistribution& s, double q_lo, double q_hi, int points) {
                const MhrCheck c = s.is_mhr(q_lo, q_hi, points);
                return py::make_tuple(c.pass, c.witness ? py::object(py::float_(*c.witness)) : py::none());
            },
            py::arg("q_lo"), py::arg("q_hi"), py::arg("points") = 129);

    m.def(
        "free_market_candidate",
        [](const Distribution& d, int n, const NumericConfig& cfg) { return free_market_candidate(d, n, cfg); },
        py::arg("dist"), py::arg("n"), py::arg("cfg") = NumericConfig{});
    m.def(
        "best_response",
        [](const std::vector<Distribution>& marginals, int provider, const std::vector<double>& peers,
           const NumericConfig& cfg) {
            const BestResponseResult r = best_response(marginals, provider, peers, cfg);
            py::dict d;
            d["price"] = r.price;
            d["revenue"] = r.revenue;
            d["star_mhr"] = r.star_mhr;
            return d;
        },
        py::arg("marginals"), py::arg("provider"), py::arg("peer_prices"), py::arg("cfg") = NumericConfig{});
    m.def(
        "verify_symmetric_equilibrium",
        [](const Distribution& d, int n, const NumericConfig& cfg) {
            return json_to_py(to_json(verify_symmetric_equilibrium(d, n, cfg)));
        },
        py::arg("dist"), py::arg("n"), py::arg("cfg") = NumericConfig{});
    m.def("limited_entry_equilibrium", &limited_entry_equilibrium, py::arg("n"));
    m.def(
        "fixed_point_box",
        [](const std::vector<Distribution>& marginals, const NumericConfig& cfg) {
            return fixed_point_box(marginals, cfg);
        },
        py::arg("marginals"), py::arg("cfg") = NumericConfig{});
    m.def(
        "fixed_point_two_providers",
        [](const std::vector<Distribution>& marginals, const NumericConfig& cfg) {
            const FixedPointResult r = fixed_point_two_providers(marginals, cfg);
            py::dict d = py::cast<py::dict>(json_to_py(to_json(r)));
            py::list iterates;
            for (const auto& row : r.trace.iterates) iterates.append(py::cast(row));
            d["iterates"] = iterates;
            return d;
        },
        py::arg("marginals"), py::arg("cfg") = NumericConfig{});

    m.def(
        "limit_entry_condition",
        [](const Distribution& d, int n, const NumericConfig& cfg) {
            const LimitEntryCondition c = limit_entry_condition(d, n, cfg);
            return py::make_tuple(c.lhs, c.rhs, c.satisfied);
        },
        py::arg("dist"), py::arg("n"), py::arg("cfg") = NumericConfig{});
    m.def(
        "compare_policies",
        [](const Distribution& d, int n, double cost, const std::string& base_value, const NumericConfig& cfg) {
            const MarketInstance m_inst = MarketInstance::symmetric_market(d, n, cost, optional_dist(base_value));
            return json_to_py(to_json(compare_policies(m_inst, cfg)));
        },
        py::arg("dist"), py::arg("n"), py::arg("cost") = 0.0, py::arg("base_value") = std::string{},
        py::arg("cfg") = NumericConfig{});
    m.def(
        "mhr_sufficiency_check",
        [](const Distribution& d, int n, const NumericConfig& cfg) {
            return to_string(mhr_sufficiency_check(d, n, cfg));
        },
        py::arg("dist"), py::arg("n"), py::arg("cfg") = NumericConfig{});

    m.def(
        "simulate_market",
        [](const std::vector<Distribution>& marginals, const std::vector<double>& prices,
           std::vector<int> active_set, const std::string& base_value, long long samples, std::uint64_t seed) {
            if (active_set.empty())
                for (std::size_t j = 0; j < marginals.size(); ++j) active_set.push_back(static_cast<int>(j));
            return json_to_py(
                to_json(simulate_market(marginals, prices, active_set, optional_dist(base_value), samples, seed)));
        },
        py::arg("marginals"), py::arg("prices"), py::arg("active_set") = std::vector<int>{},
        py::arg("base_value") = std::string{}, py::arg("samples") = 1000000, py::arg("seed") = 1729);
    m.def("empirical_star_survival", &empirical_star_survival, py::arg("marginals"), py::arg("provider"),
          py::arg("peer_prices"), py::arg("q"), py::arg("samples") = 1000000, py::arg("seed") = 1729);
    m.def("empirical_best_response", &empirical_best_response, py::arg("marginals"), py::arg("provider"),
          py::arg("peer_prices"), py::arg("q_grid"), py::arg("samples") = 1000000, py::arg("seed") = 1729);

    m.def(
        "run_appendix_verification",
        [](const NumericConfig& cfg) { return json_to_py(run_appendix_verification(cfg).to_json()); },
        py::arg("cfg") = NumericConfig{});
}
