#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "marketeq/appendix.hpp"
#include "marketeq/equilibrium.hpp"
#include "marketeq/json_io.hpp"
#include "marketeq/montecarlo.hpp"
#include "marketeq/order_statistics.hpp"
#include "marketeq/policy.hpp"
#include "marketeq/star.hpp"

namespace {

using marketeq::NumericConfig;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericFailure = 3;
constexpr int kExitVerificationFailure = 4;

void load_config_file(NumericConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw marketeq::InvalidParameterError("cannot open config file '" + path + "'");
    nlohmann::json j;
    in >> j;
    if (j.contains("quad_abs_tol")) cfg.quad_abs_tol = j["quad_abs_tol"].get<double>();
    if (j.contains("quad_rel_tol")) cfg.quad_rel_tol = j["quad_rel_tol"].get<double>();
    if (j.contains("grid_points")) cfg.grid_points = j["grid_points"].get<int>();
    if (j.contains("eq_tolerance")) cfg.eq_tolerance = j["eq_tolerance"].get<double>();
    if (j.contains("rev_tolerance")) cfg.rev_tolerance = j["rev_tolerance"].get<double>();
    if (j.contains("fp_tolerance")) cfg.fp_tolerance = j["fp_tolerance"].get<double>();
    if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"].get<int>();
    if (j.contains("consistency_band")) cfg.consistency_band = j["consistency_band"].get<double>();
    if (j.contains("mc_samples")) cfg.mc_samples = j["mc_samples"].get<long long>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("truncation_quantile")) cfg.truncation_quantile = j["truncation_quantile"].get<double>();
}

std::vector<double> parse_number_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw marketeq::InvalidParameterError("cannot parse " + what + " entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw marketeq::InvalidParameterError(what + " list is empty");
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_csv_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Price equilibria and entry-policy comparisons in mandatory-purchase markets"};
    app.require_subcommand(1);

    NumericConfig cfg;
    std::string config_path;
    if (const char* env = std::getenv("MARKETEQ_CONFIG")) config_path = env;

    app.add_option("--config", config_path, "JSON config file with NumericConfig fields");
    std::vector<CLI::Option*> cfg_options;
    cfg_options.push_back(app.add_option("--quad-abs-tol", cfg.quad_abs_tol, "absolute quadrature tolerance"));
    cfg_options.push_back(app.add_option("--quad-rel-tol", cfg.quad_rel_tol, "relative quadrature tolerance"));
    cfg_options.push_back(app.add_option("--grid-points", cfg.grid_points, "coarse grid size for searches"));
    cfg_options.push_back(
        app.add_option("--eq-tolerance", cfg.eq_tolerance, "relative price gap for an equilibrium verdict"));
    cfg_options.push_back(
        app.add_option("--rev-tolerance", cfg.rev_tolerance, "relative revenue slack for an equilibrium verdict"));
    cfg_options.push_back(app.add_option("--fp-tolerance", cfg.fp_tolerance, "fixed point stopping tolerance"));
    cfg_options.push_back(app.add_option("--max-iterations", cfg.max_iterations, "fixed point iteration cap"));
    cfg_options.push_back(
        app.add_option("--consistency-band", cfg.consistency_band, "dead band for the utility sign check"));
    cfg_options.push_back(app.add_option("--mc-samples,--n-samples", cfg.mc_samples, "Monte Carlo sample count"));
    cfg_options.push_back(app.add_option("--seed", cfg.seed, "Monte Carlo seed"));
    cfg_options.push_back(app.add_option("--truncation-quantile", cfg.truncation_quantile,
                                         "upper quantile cut for improper integrals"));

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "distribution class verdicts with witnesses");
    std::string classify_spec;
    cmd_classify->add_option("dist", classify_spec, "distribution spec")->required();

    // equilibrium
    auto* cmd_eq = app.add_subcommand("equilibrium", "verify the symmetric free-market equilibrium");
    std::string eq_spec;
    int eq_n = 2;
    double eq_cost = 0.0;
    cmd_eq->add_option("dist", eq_spec, "distribution spec")->required();
    cmd_eq->add_option("-n,--providers", eq_n, "number of providers")->required();
    cmd_eq->add_option("--cost", eq_cost, "per-consumer provider cost");

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "consumer utility: free market vs limited entry");
    std::string cmp_spec, cmp_base;
    int cmp_n = 2;
    double cmp_cost = 0.0;
    cmd_compare->add_option("dist", cmp_spec, "distribution spec")->required();
    cmd_compare->add_option("-n,--providers", cmp_n, "number of providers")->required();
    cmd_compare->add_option("--cost", cmp_cost, "per-consumer provider cost");
    cmd_compare->add_option("--base-value", cmp_base, "common base-value distribution spec");

    // star
    auto* cmd_star = app.add_subcommand("star", "CSV curve of the derived win-probability law");
    std::string star_spec;
    int star_n = 2, star_steps = 101;
    double star_p = 1.0, star_qlo = 0.0, star_qhi = -1.0;
    bool star_check = false;
    cmd_star->add_option("dist", star_spec, "distribution spec")->required();
    cmd_star->add_option("-n,--providers", star_n, "number of providers")->required();
    cmd_star->add_option("-p,--peer-price", star_p, "common peer price")->required();
    cmd_star->add_option("--q-lo", star_qlo, "curve start");
    cmd_star->add_option("--q-hi", star_qhi, "curve end (default 3x peer price)");
    cmd_star->add_option("--steps", star_steps, "number of grid rows");
    cmd_star->add_flag("--check-derivatives", star_check,
                       "verify pdf and pdf_prime against finite differences at each row");

    // asym
    auto* cmd_asym = app.add_subcommand("asym", "two-provider best-response fixed point");
    std::string asym_spec1, asym_spec2, asym_trace_path;
    cmd_asym->add_option("dist1", asym_spec1, "provider 1 marginal")->required();
    cmd_asym->add_option("dist2", asym_spec2, "provider 2 marginal")->required();
    cmd_asym->add_option("--trace-csv", asym_trace_path, "write iterates as CSV (iter,p1,p2)");

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo market simulation");
    std::vector<std::string> sim_specs;
    std::string sim_prices, sim_active;
    std::string sim_base;
    int sim_n = 0;
    cmd_sim->add_option("dist", sim_specs, "marginal spec (repeat for asymmetric markets)")->required();
    cmd_sim->add_option("--prices", sim_prices, "comma-separated prices, one per provider")->required();
    cmd_sim->add_option("--active", sim_active, "comma-separated active provider indices (default: all)");
    cmd_sim->add_option("-n,--providers", sim_n, "provider count when one spec is given for all");
    cmd_sim->add_option("--base-value", sim_base, "common base-value distribution spec");
    std::string sim_curve_path;
    int sim_curve_provider = 0;
    double sim_curve_qlo = 0.0, sim_curve_qhi = 0.0;
    int sim_curve_steps = 101;
    cmd_sim->add_option("--revenue-curve-csv", sim_curve_path,
                        "write the common-random-number revenue curve (q,revenue_estimate,stderr)");
    cmd_sim->add_option("--curve-provider", sim_curve_provider, "provider whose price varies along the curve");
    cmd_sim->add_option("--curve-q-lo", sim_curve_qlo, "curve start");
    cmd_sim->add_option("--curve-q-hi", sim_curve_qhi, "curve end");
    cmd_sim->add_option("--curve-steps", sim_curve_steps, "curve grid size");

    // verify-appendix
    auto* cmd_verify = app.add_subcommand("verify-appendix", "counterexample reproduction battery");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "policy comparison over spec x n grid (CSV)");
    std::string sweep_dists, sweep_ns;
    double sweep_cost = 0.0;
    cmd_sweep->add_option("--dists", sweep_dists, "semicolon-separated distribution specs")->required();
    cmd_sweep->add_option("--n", sweep_ns, "comma-separated provider counts")->required();
    cmd_sweep->add_option("--cost", sweep_cost, "per-consumer provider cost");

    // Config flags may appear after the subcommand name.
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (!config_path.empty()) {
            // Flags win over the config file: load into a copy, then restore
            // every value that was set explicitly on the command line.
            const NumericConfig from_flags = cfg;
            load_config_file(cfg, config_path);
            int idx = 0;
            const auto keep_flag = [&](auto member) {
                if (cfg_options[static_cast<std::size_t>(idx)]->count() > 0) cfg.*member = from_flags.*member;
                ++idx;
            };
            keep_flag(&NumericConfig::quad_abs_tol);
            keep_flag(&NumericConfig::quad_rel_tol);
            keep_flag(&NumericConfig::grid_points);
            keep_flag(&NumericConfig::eq_tolerance);
            keep_flag(&NumericConfig::rev_tolerance);
            keep_flag(&NumericConfig::fp_tolerance);
            keep_flag(&NumericConfig::max_iterations);
            keep_flag(&NumericConfig::consistency_band);
            keep_flag(&NumericConfig::mc_samples);
            keep_flag(&NumericConfig::seed);
            keep_flag(&NumericConfig::truncation_quantile);
        }
        cfg.validate();

        if (cmd_classify->parsed()) {
            const marketeq::Distribution d = marketeq::make_distribution(classify_spec);
            const marketeq::Classification cls = marketeq::classify(d, cfg);
            std::cout << marketeq::to_json(cls, d.spec()).dump(2) << "\n";
            std::cerr << d.spec() << ": regular " << (cls.regular.pass ? "yes" : "no") << ", MHR "
                      << (cls.mhr.pass ? "yes" : "no") << ", MHR+ " << (cls.mhr_plus.pass ? "yes" : "no")
                      << ", decreasing density " << (cls.decreasing_density.pass ? "yes" : "no") << "\n";
            return kExitOk;
        }

        if (cmd_eq->parsed()) {
            const marketeq::Distribution d = marketeq::make_distribution(eq_spec);
            marketeq::EquilibriumReport report = marketeq::verify_symmetric_equilibrium(d, eq_n, cfg);
            if (eq_cost > 0.0)
                report = marketeq::apply_cost(marketeq::MarketInstance::symmetric_market(d, eq_n, eq_cost),
                                              std::move(report));
            std::cout << marketeq::to_json(report).dump(2) << "\n";
            std::cerr << d.spec() << " with n=" << eq_n << ": " << marketeq::to_string(report.verdict);
            if (!report.candidate_prices.empty())
                std::cerr << " at price " << report.candidate_prices.front();
            std::cerr << "\n";
            return report.verdict == marketeq::EqVerdict::Inconclusive ? kExitNumericFailure : kExitOk;
        }

        if (cmd_compare->parsed()) {
            const marketeq::Distribution d = marketeq::make_distribution(cmp_spec);
            std::optional<marketeq::Distribution> base;
            if (!cmp_base.empty()) base = marketeq::make_distribution(cmp_base);
            const marketeq::MarketInstance m =
                marketeq::MarketInstance::symmetric_market(d, cmp_n, cmp_cost, base);
            const marketeq::PolicyComparison cmp = marketeq::compare_policies(m, cfg);
            std::cout << marketeq::to_json(cmp).dump(2) << "\n";
            std::cerr << d.spec() << " with n=" << cmp_n << ": limited-entry utility " << cmp.utility_limited
                      << " vs free-market " << cmp.utility_free << " (condition "
                      << (cmp.condition_satisfied ? "satisfied" : "violated") << ")\n";
            return kExitOk;
        }

        if (cmd_star->parsed()) {
            const marketeq::Distribution d = marketeq::make_distribution(star_spec);
            if (star_qhi < 0.0) star_qhi = 3.0 * star_p;
            if (star_steps < 2) throw marketeq::InvalidParameterError("star: steps must be >= 2");
            marketeq::StarDistribution star(d, star_n, star_p, cfg);
            // pdf_prime has kinks in q wherever a density jump of the
            // marginal crosses the moving lower limit or a peer critical
            // point; derivative checks skip a neighborhood of each.
            std::vector<double> kink_q{star_p};
            {
                std::vector<double> criticals{d.support_lo()};
                if (d.bounded()) criticals.push_back(d.support_hi());
                for (double s : d.discontinuities()) criticals.push_back(s);
                for (double s : criticals)
                    for (double c : criticals) kink_q.push_back(star_p + s - c);
            }
            int check_failures = 0;
            std::cout << "q,survival,pdf,pdf_prime,hazard,virtual\n";
            for (int j = 0; j < star_steps; ++j) {
                const double q = star_qlo + (star_qhi - star_qlo) * j / (star_steps - 1);
                const double S = star.survival(q);
                const double f = star.pdf(q);
                const double fp = star.pdf_prime(q);
                print_csv_value(std::cout, q);
                std::cout << ",";
                print_csv_value(std::cout, S);
                std::cout << ",";
                print_csv_value(std::cout, f);
                std::cout << ",";
                print_csv_value(std::cout, fp);
                std::cout << ",";
                print_csv_value(std::cout, S > 0.0 ? f / S : std::numeric_limits<double>::quiet_NaN());
                std::cout << ",";
                print_csv_value(std::cout, f > 0.0 ? q - S / f : std::numeric_limits<double>::quiet_NaN());
                std::cout << "\n";
                bool near_kink = false;
                for (double kq : kink_q)
                    if (std::abs(q - kq) <= 0.01 * std::max(1.0, star_p)) near_kink = true;
                if (star_check && !near_kink) {
                    // Derivative consistency away from the kink at the peer
                    // price: pdf vs -dS/dq at rel 1e-4, pdf_prime vs df/dq
                    // at rel 1e-3.
                    const double h = 1e-4 * std::max(1.0, q);
                    const double fd_S = (star.survival(q - h) - star.survival(q + h)) / (2.0 * h);
                    if (std::abs(f) > 1e-7 && std::abs(fd_S - f) > 1e-4 * std::abs(f)) {
                        ++check_failures;
                        std::cerr << "derivative check failed at q=" << q << ": pdf " << f
                                  << " vs -dS/dq " << fd_S << "\n";
                    }
                    const double fd_f = (star.pdf(q + h) - star.pdf(q - h)) / (2.0 * h);
                    if (std::abs(fp) > 1e-6 && std::abs(fd_f - fp) > 1e-3 * std::abs(fp)) {
                        ++check_failures;
                        std::cerr << "derivative check failed at q=" << q << ": pdf_prime " << fp
                                  << " vs d(pdf)/dq " << fd_f << "\n";
                    }
                }
            }
            if (star_check) {
                std::cerr << (check_failures ? "derivative checks FAILED" : "derivative checks passed") << "\n";
                if (check_failures) return kExitVerificationFailure;
            }
            return kExitOk;
        }

        if (cmd_asym->parsed()) {
            std::vector<marketeq::Distribution> marginals{marketeq::make_distribution(asym_spec1),
                                                          marketeq::make_distribution(asym_spec2)};
            const marketeq::FixedPointResult result = marketeq::fixed_point_two_providers(marginals, cfg);
            std::cout << marketeq::to_json(result).dump(2) << "\n";
            if (!asym_trace_path.empty()) {
                std::ofstream trace(asym_trace_path);
                trace << "iter,p1,p2\n";
                for (std::size_t it = 0; it < result.trace.iterates.size(); ++it) {
                    trace << it;
                    for (double p : result.trace.iterates[it]) {
                        trace << ",";
                        print_csv_value(trace, p);
                    }
                    trace << "\n";
                }
            }
            std::cerr << "fixed point (" << result.prices[0] << ", " << result.prices[1] << ") after "
                      << result.trace.iterations << " iterations"
                      << (result.trace.heuristic ? " [heuristic]" : "") << "\n";
            return kExitOk;
        }

        if (cmd_sim->parsed()) {
            std::vector<marketeq::Distribution> marginals;
            for (const std::string& s : sim_specs) marginals.push_back(marketeq::make_distribution(s));
            if (sim_n > 0 && marginals.size() == 1)
                marginals.assign(static_cast<std::size_t>(sim_n), marginals.front());
            const std::vector<double> prices = parse_number_list(sim_prices, "price");
            if (prices.size() != marginals.size())
                throw marketeq::InvalidParameterError("need one price per provider");
            std::vector<int> active;
            if (sim_active.empty()) {
                for (std::size_t j = 0; j < marginals.size(); ++j) active.push_back(static_cast<int>(j));
            } else {
                for (double v : parse_number_list(sim_active, "active set")) active.push_back(static_cast<int>(v));
            }
            std::optional<marketeq::Distribution> base;
            if (!sim_base.empty()) base = marketeq::make_distribution(sim_base);
            const marketeq::SimResult r =
                marketeq::simulate_market(marginals, prices, active, base, cfg.mc_samples, cfg.seed);
            std::cout << marketeq::to_json(r).dump(2) << "\n";
            std::cerr << "simulated " << r.samples << " consumers; utility " << r.utility << " +/- "
                      << 2.0 * r.utility_stderr << "\n";
            if (!sim_curve_path.empty()) {
                if (!(sim_curve_qhi > sim_curve_qlo) || sim_curve_steps < 2)
                    throw marketeq::InvalidParameterError("revenue curve needs --curve-q-lo < --curve-q-hi");
                std::vector<double> grid;
                for (int j = 0; j < sim_curve_steps; ++j)
                    grid.push_back(sim_curve_qlo +
                                   (sim_curve_qhi - sim_curve_qlo) * j / (sim_curve_steps - 1));
                std::vector<double> peer_prices;
                for (std::size_t j = 0; j < marginals.size(); ++j)
                    if (static_cast<int>(j) != sim_curve_provider)
                        peer_prices.push_back(prices[static_cast<std::size_t>(j)]);
                const auto curve = marketeq::empirical_revenue_curve(marginals, sim_curve_provider,
                                                                     peer_prices, grid, cfg.mc_samples, cfg.seed);
                std::ofstream csv(sim_curve_path);
                csv << "q,revenue_estimate,stderr\n";
                for (const marketeq::RevenuePoint& pt : curve) {
                    print_csv_value(csv, pt.q);
                    csv << ",";
                    print_csv_value(csv, pt.revenue);
                    csv << ",";
                    print_csv_value(csv, pt.stderr_);
                    csv << "\n";
                }
            }
            return kExitOk;
        }

        if (cmd_verify->parsed()) {
            const marketeq::AppendixReport report = marketeq::run_appendix_verification(cfg);
            std::cout << report.to_json().dump(2) << "\n";
            for (const marketeq::AppendixItem& item : report.items) {
                std::cerr << (item.pass ? "[pass] " : "[FAIL] ") << item.name << "\n";
                for (const std::string& f : item.failures) std::cerr << "    failed: " << f << "\n";
                for (const std::string& w : item.warnings) std::cerr << "    warning: " << w << "\n";
            }
            return report.all_pass ? kExitOk : kExitVerificationFailure;
        }

        if (cmd_sweep->parsed()) {
            const std::vector<std::string> specs = split(sweep_dists, ';');
            if (specs.empty()) throw marketeq::InvalidParameterError("sweep: no distribution specs");
            std::vector<int> ns;
            for (double v : parse_number_list(sweep_ns, "n")) ns.push_back(static_cast<int>(v));
            std::cout << "dist_spec,n,cost,h2n,H1n,V1n,V1n1,utility_free,utility_limited,condition,"
                         "eq_verdict,consistent\n";
            for (const std::string& s : specs) {
                const marketeq::Distribution d = marketeq::make_distribution(s);
                for (int n : ns) {
                    const marketeq::MarketInstance m =
                        marketeq::MarketInstance::symmetric_market(d, n, sweep_cost);
                    const marketeq::PolicyComparison c = marketeq::compare_policies(m, cfg);
                    std::cout << d.spec() << "," << n << ",";
                    print_csv_value(std::cout, c.cost);
                    std::cout << ",";
                    print_csv_value(std::cout, c.h2n);
                    std::cout << ",";
                    print_csv_value(std::cout, c.H1n);
                    std::cout << ",";
                    print_csv_value(std::cout, c.v1n);
                    std::cout << ",";
                    print_csv_value(std::cout, c.v1n_minus_1);
                    std::cout << ",";
                    print_csv_value(std::cout, c.utility_free);
                    std::cout << ",";
                    print_csv_value(std::cout, c.utility_limited);
                    std::cout << "," << (c.condition_satisfied ? "satisfied" : "violated") << ","
                              << c.free_market_equilibrium_exists << ","
                              << (c.utilities_consistent ? "true" : "false") << "\n";
                }
            }
            return kExitOk;
        }
    } catch (const marketeq::InvalidSpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const marketeq::InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const marketeq::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumericFailure;
    } catch (const marketeq::VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericFailure;
    }
    return kExitOk;
}
