#include "marketeq/config.hpp"

#include "marketeq/errors.hpp"

namespace marketeq {

void NumericConfig::validate() const {
    const bool tolerances_ok = quad_abs_tol > 0 && quad_rel_tol > 0 && eq_tolerance > 0 &&
                               rev_tolerance > 0 && fp_tolerance > 0 && consistency_band > 0 &&
                               truncation_quantile > 0 && truncation_quantile < 1;
    if (!tolerances_ok) throw InvalidParameterError("config: all tolerances must be positive");
    if (grid_points < 100) throw InvalidParameterError("config: grid_points must be >= 100");
    if (max_iterations < 1) throw InvalidParameterError("config: max_iterations must be >= 1");
    if (mc_samples < 1) throw InvalidParameterError("config: mc_samples must be >= 1");
}

}  // namespace marketeq
