#include "marketeq/json_io.hpp"

namespace marketeq {

using nlohmann::json;

json to_json(const Verdict& v) {
    json j;
    j["pass"] = v.pass;
    if (v.witness.has_value()) j["witness"] = *v.witness;
    return j;
}

json to_json(const Classification& c, const std::string& dist_spec) {
    json j;
    j["dist"] = dist_spec;
    j["regular"] = to_json(c.regular);
    j["mhr"] = to_json(c.mhr);
    j["mhr_plus"] = to_json(c.mhr_plus);
    j["mhr_plus_c"] = c.mhr_plus_c;
    j["decreasing_density"] = to_json(c.decreasing_density);
    return j;
}

json to_json(const MhrCheck& m) {
    json j;
    j["pass"] = m.pass;
    if (m.witness.has_value()) j["witness"] = *m.witness;
    return j;
}

json to_json(const EquilibriumReport& r) {
    json j;
    j["setting"] = r.setting;
    j["dist"] = r.dist_spec;
    j["n"] = r.n;
    j["cost"] = r.cost;
    j["candidate_prices"] = r.candidate_prices;
    j["best_responses"] = r.best_responses;
    j["relative_gap"] = r.relative_gap;
    j["revenue_at_candidate"] = r.revenue_at_candidate;
    j["revenue_at_best_response"] = r.revenue_at_best_response;
    if (r.star_mhr_checked) j["star_mhr"] = to_json(r.star_mhr);
    j["verdict"] = to_string(r.verdict);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j;
}

json to_json(const PolicyComparison& p) {
    json j;
    j["dist"] = p.dist_spec;
    j["n"] = p.n;
    j["cost"] = p.cost;
    j["base_value_mean"] = p.base_value_mean;
    j["V1n"] = p.v1n;
    j["V1n_minus_1"] = p.v1n_minus_1;
    j["V2n"] = p.v2n;
    j["h2n"] = p.h2n;
    j["H1n"] = p.H1n;
    j["utility_free"] = p.utility_free;
    j["utility_limited"] = p.utility_limited;
    j["limit_entry_lhs"] = p.limit_entry_lhs;
    j["limit_entry_rhs"] = p.limit_entry_rhs;
    j["condition_satisfied"] = p.condition_satisfied;
    j["utilities_consistent"] = p.utilities_consistent;
    j["free_market_equilibrium_exists"] = p.free_market_equilibrium_exists;
    return j;
}

json to_json(const SimResult& r) {
    json j;
    j["shares"] = r.shares;
    j["counts"] = r.counts;
    j["revenue"] = r.revenue;
    j["welfare"] = r.welfare;
    j["utility"] = r.utility;
    json se;
    se["shares"] = r.share_stderr;
    se["revenue"] = r.revenue_stderr;
    se["welfare"] = r.welfare_stderr;
    se["utility"] = r.utility_stderr;
    j["stderr"] = se;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    return j;
}

json to_json(const FixedPointResult& r) {
    json j;
    j["prices"] = r.prices;
    j["box_bound"] = r.trace.box_bound;
    j["converged"] = r.trace.converged;
    j["iterations"] = r.trace.iterations;
    j["heuristic"] = r.trace.heuristic;
    j["mutual_best_response_verified"] = r.trace.mutual_best_response_verified;
    j["max_mutual_gap"] = r.trace.max_mutual_gap;
    return j;
}

}  // namespace marketeq
