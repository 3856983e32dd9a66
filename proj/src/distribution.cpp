#include "marketeq/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "marketeq/optimize.hpp"
#include "marketeq/quadrature.hpp"

namespace marketeq {

namespace detail {

class DistImpl {
public:
    virtual ~DistImpl() = default;
    virtual double cdf(double x) const = 0;
    virtual double survival(double x) const = 0;
    virtual double pdf(double x) const = 0;
    virtual double pdf_right(double x) const { return pdf(x); }
    virtual double pdf_prime(double x) const = 0;
    virtual double pdf_prime_right(double x) const { return pdf_prime(x); }
    virtual double quantile(double u) const = 0;
    virtual double hazard(double x) const {
        const double s = survival(x);
        if (s <= 0.0) throw UndefinedValueError("hazard undefined: cdf(x) = 1 at x = " + std::to_string(x));
        return pdf(x) / s;
    }
    virtual double support_lo() const = 0;
    virtual double support_hi() const = 0;
    virtual const std::vector<double>& discontinuities() const {
        static const std::vector<double> none;
        return none;
    }
    virtual const std::string& spec() const = 0;
};

double normal_quantile(double p) {
    // Wichura's AS241 (PPND16).
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameterError("normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r + 6.7265770927008700853e4) * r +
                    4.5921953931549871457e4) * r + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r + 3.9307895800092710610e4) * r +
                    2.1213794301586595867e4) * r + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
                   1.27045825245236838258e0) * r + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

std::string format_params(const std::string& name, const std::vector<std::pair<std::string, double>>& params) {
    std::ostringstream out;
    out.precision(12);
    out << name << "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out << ",";
        out << params[i].first << "=" << params[i].second;
    }
    out << ")";
    return out.str();
}

class Exponential final : public DistImpl {
public:
    explicit Exponential(double rate) : rate_(rate), spec_(format_params("exp", {{"rate", rate}})) {}

    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }
    double survival(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-rate_ * x); }
    double pdf(double x) const override { return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x); }
    double pdf_prime(double x) const override { return x < 0.0 ? 0.0 : -rate_ * rate_ * std::exp(-rate_ * x); }
    double quantile(double u) const override { return -std::log1p(-u) / rate_; }
    double hazard(double x) const override {
        (void)x;
        return rate_;
    }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return std::numeric_limits<double>::infinity(); }
    const std::string& spec() const override { return spec_; }

private:
    double rate_;
    std::string spec_;
};

class Uniform final : public DistImpl {
public:
    Uniform(double lo, double hi)
        : lo_(lo), hi_(hi), density_(1.0 / (hi - lo)), spec_(format_params("uniform", {{"lo", lo}, {"hi", hi}})) {}

    double cdf(double x) const override {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        return (x - lo_) * density_;
    }
    double survival(double x) const override {
        if (x <= lo_) return 1.0;
        if (x >= hi_) return 0.0;
        return (hi_ - x) * density_;
    }
    double pdf(double x) const override { return (x >= lo_ && x <= hi_) ? density_ : 0.0; }
    double pdf_right(double x) const override { return (x >= lo_ && x < hi_) ? density_ : 0.0; }
    double pdf_prime(double) const override { return 0.0; }
    double quantile(double u) const override { return lo_ + u * (hi_ - lo_); }
    double hazard(double x) const override {
        if (x >= hi_) throw UndefinedValueError("hazard undefined at the top of a bounded support");
        return x < lo_ ? 0.0 : 1.0 / (hi_ - x);
    }
    double support_lo() const override { return lo_; }
    double support_hi() const override { return hi_; }
    const std::string& spec() const override { return spec_; }

private:
    double lo_, hi_, density_;
    std::string spec_;
};

class HalfNormal final : public DistImpl {
public:
    explicit HalfNormal(double sigma)
        : sigma_(sigma),
          norm_(std::sqrt(2.0 / M_PI) / sigma),
          spec_(format_params("halfnormal", {{"sigma", sigma}})) {}

    double cdf(double x) const override { return x <= 0.0 ? 0.0 : std::erf(x / (sigma_ * M_SQRT2)); }
    double survival(double x) const override { return x <= 0.0 ? 1.0 : std::erfc(x / (sigma_ * M_SQRT2)); }
    double pdf(double x) const override {
        return x < 0.0 ? 0.0 : norm_ * std::exp(-0.5 * (x / sigma_) * (x / sigma_));
    }
    double pdf_prime(double x) const override { return x < 0.0 ? 0.0 : -(x / (sigma_ * sigma_)) * pdf(x); }
    double quantile(double u) const override {
        if (u <= 0.0) return 0.0;
        return sigma_ * normal_quantile(0.5 * (1.0 + u));
    }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return std::numeric_limits<double>::infinity(); }
    const std::string& spec() const override { return spec_; }

private:
    double sigma_, norm_;
    std::string spec_;
};

// Two-piece constant-hazard family: hazard h1 on [0,t), h2 on (t,inf), with
// cdf(t) = mass1 fixing the threshold. h1 = h2 degenerates to exponential.
class PiecewiseExp final : public DistImpl {
public:
    PiecewiseExp(double h1, double h2, double mass1, std::string spec)
        : h1_(h1),
          h2_(h2),
          mass1_(mass1),
          threshold_(-std::log1p(-mass1) / h1),
          tail_(1.0 - mass1),
          spec_(std::move(spec)) {
        if (h1_ != h2_) discontinuities_.push_back(threshold_);
    }

    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x <= threshold_) return -std::expm1(-h1_ * x);
        return 1.0 - tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double survival(double x) const override {
        if (x <= 0.0) return 1.0;
        if (x <= threshold_) return std::exp(-h1_ * x);
        return tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x <= threshold_) return h1_ * std::exp(-h1_ * x);
        return h2_ * tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double pdf_right(double x) const override {
        if (x < 0.0) return 0.0;
        if (x < threshold_) return h1_ * std::exp(-h1_ * x);
        return h2_ * tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double pdf_prime(double x) const override {
        if (x < 0.0) return 0.0;
        if (x <= threshold_) return -h1_ * h1_ * std::exp(-h1_ * x);
        return -h2_ * h2_ * tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double pdf_prime_right(double x) const override {
        if (x < 0.0) return 0.0;
        if (x < threshold_) return -h1_ * h1_ * std::exp(-h1_ * x);
        return -h2_ * h2_ * tail_ * std::exp(-h2_ * (x - threshold_));
    }
    double quantile(double u) const override {
        if (u <= 0.0) return 0.0;
        if (u <= mass1_) return -std::log1p(-u) / h1_;
        return threshold_ + std::log(tail_ / (1.0 - u)) / h2_;
    }
    double hazard(double x) const override { return x <= threshold_ ? h1_ : h2_; }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return std::numeric_limits<double>::infinity(); }
    const std::vector<double>& discontinuities() const override { return discontinuities_; }
    const std::string& spec() const override { return spec_; }

private:
    double h1_, h2_, mass1_, threshold_, tail_;
    std::vector<double> discontinuities_;
    std::string spec_;
};

}  // namespace

}  // namespace detail

Distribution::Distribution(std::shared_ptr<const detail::DistImpl> impl) : impl_(std::move(impl)) {}

double Distribution::cdf(double x) const { return impl_->cdf(x); }
double Distribution::survival(double x) const { return impl_->survival(x); }
double Distribution::pdf(double x) const { return impl_->pdf(x); }
double Distribution::pdf_right(double x) const { return impl_->pdf_right(x); }
double Distribution::pdf_prime(double x) const { return impl_->pdf_prime(x); }
double Distribution::pdf_prime_right(double x) const { return impl_->pdf_prime_right(x); }
double Distribution::quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0)) throw InvalidParameterError("quantile: probability outside [0,1)");
    return impl_->quantile(u);
}
double Distribution::hazard(double x) const { return impl_->hazard(x); }
double Distribution::support_lo() const { return impl_->support_lo(); }
double Distribution::support_hi() const { return impl_->support_hi(); }
bool Distribution::bounded() const { return std::isfinite(impl_->support_hi()); }
const std::vector<double>& Distribution::discontinuities() const { return impl_->discontinuities(); }
double Distribution::upper_integration_limit(double truncation_quantile) const {
    return bounded() ? support_hi() : impl_->quantile(truncation_quantile);
}
const std::string& Distribution::spec() const { return impl_->spec(); }

Distribution make_exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidParameterError("exp: rate must be > 0");
    return Distribution(std::make_shared<detail::Exponential>(rate));
}

Distribution make_uniform(double lo, double hi) {
    if (!(lo >= 0.0)) throw InvalidParameterError("uniform: lo must be >= 0");
    if (!(hi > lo)) throw InvalidParameterError("uniform: hi must be > lo");
    return Distribution(std::make_shared<detail::Uniform>(lo, hi));
}

Distribution make_half_normal(double sigma) {
    if (!(sigma > 0.0)) throw InvalidParameterError("halfnormal: sigma must be > 0");
    return Distribution(std::make_shared<detail::HalfNormal>(sigma));
}

Distribution make_piecewise_exp(double h1, double h2, double mass1) {
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw InvalidParameterError("pwexp: hazard rates must be > 0");
    if (!(mass1 > 0.0 && mass1 < 1.0)) throw InvalidParameterError("pwexp: mass1 must be in (0,1)");
    return Distribution(std::make_shared<detail::PiecewiseExp>(
        h1, h2, mass1, detail::format_params("pwexp", {{"h1", h1}, {"h2", h2}, {"mass1", mass1}})));
}

Distribution make_epsk(double eps, double k) {
    if (!(eps > 0.0)) throw InvalidParameterError("epsk: eps must be > 0");
    if (!(k > 1.0)) throw InvalidParameterError("epsk: k must be > 1");
    return Distribution(std::make_shared<detail::PiecewiseExp>(
        eps, 1.0, 1.0 / k, detail::format_params("epsk", {{"eps", eps}, {"k", k}})));
}

namespace {

struct FamilyInfo {
    std::vector<std::string> params;
    Distribution (*build)(const std::vector<double>&);
};

const std::map<std::string, FamilyInfo>& family_table() {
    static const std::map<std::string, FamilyInfo> table = {
        {"exp", {{"rate"}, [](const std::vector<double>& v) { return make_exponential(v[0]); }}},
        {"uniform", {{"lo", "hi"}, [](const std::vector<double>& v) { return make_uniform(v[0], v[1]); }}},
        {"halfnormal", {{"sigma"}, [](const std::vector<double>& v) { return make_half_normal(v[0]); }}},
        {"pwexp",
         {{"h1", "h2", "mass1"}, [](const std::vector<double>& v) { return make_piecewise_exp(v[0], v[1], v[2]); }}},
        {"epsk", {{"eps", "k"}, [](const std::vector<double>& v) { return make_epsk(v[0], v[1]); }}},
    };
    return table;
}

}  // namespace

Distribution make_distribution(const std::string& raw) {
    std::string s;
    s.reserve(raw.size());
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);

    const auto open = s.find('(');
    if (open == std::string::npos || s.empty() || s.back() != ')')
        throw InvalidSpecError("cannot parse distribution spec '" + raw + "'");
    const std::string name = s.substr(0, open);
    const auto it = family_table().find(name);
    if (it == family_table().end()) throw InvalidSpecError("unknown distribution family '" + name + "'");
    const FamilyInfo& fam = it->second;

    const std::string body = s.substr(open + 1, s.size() - open - 2);
    std::vector<std::optional<double>> values(fam.params.size());
    std::size_t pos = 0, index = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        std::string item = body.substr(pos, comma - pos);
        if (item.empty()) throw InvalidSpecError("empty parameter in spec '" + raw + "'");

        std::size_t slot = index;
        const auto eq = item.find('=');
        if (eq != std::string::npos) {
            const std::string pname = item.substr(0, eq);
            const auto pit = std::find(fam.params.begin(), fam.params.end(), pname);
            if (pit == fam.params.end())
                throw InvalidSpecError("unknown parameter '" + pname + "' for family '" + name + "'");
            slot = static_cast<std::size_t>(pit - fam.params.begin());
            item = item.substr(eq + 1);
        }
        if (slot >= values.size()) throw InvalidSpecError("too many parameters for family '" + name + "'");
        if (values[slot].has_value())
            throw InvalidSpecError("parameter '" + fam.params[slot] + "' given twice in '" + raw + "'");

        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0' || !std::isfinite(v))
            throw InvalidSpecError("cannot parse number '" + item + "' in spec '" + raw + "'");
        values[slot] = v;
        pos = comma + 1;
        ++index;
    }
    std::vector<double> args;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].has_value())
            throw InvalidSpecError("missing parameter '" + fam.params[i] + "' for family '" + name + "'");
        args.push_back(*values[i]);
    }
    return fam.build(args);
}

double virtual_value(const Distribution& d, double v) {
    const double f = d.pdf(v);
    if (!(f > 0.0)) throw UndefinedValueError("virtual value undefined: pdf(v) = 0 at v = " + std::to_string(v));
    return v - d.survival(v) / f;
}

double revenue_maximizer_grid(const Distribution& d, const NumericConfig& cfg) {
    const double lo = d.support_lo();
    const double hi = d.upper_integration_limit(cfg.truncation_quantile);
    const auto revenue = [&](double p) { return p * d.survival(p); };

    const int n = std::max(cfg.grid_points, 100);
    int best = 0;
    double best_rev = -1.0;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        xs[j] = lo + (hi - lo) * j / (n - 1);
        const double r = revenue(xs[j]);
        if (r > best_rev) {
            best_rev = r;
            best = j;
        }
    }
    const double a = xs[std::max(0, best - 1)];
    const double b = xs[std::min(n - 1, best + 1)];
    auto [x, fx] = golden_section_max(revenue, a, b, 1e-8 * std::max(1.0, hi));
    return fx >= best_rev ? x : xs[best];
}

double virtual_value_inverse_zero(const Distribution& d, const NumericConfig& cfg) {
    const Classification cls = classify(d, cfg);
    if (!cls.regular.pass) return revenue_maximizer_grid(d, cfg);

    // Regular: the virtual value is nondecreasing; bisect on its sign change.
    const double lo = d.support_lo();
    const double hi = d.upper_integration_limit(cfg.truncation_quantile);
    const int n = std::max(cfg.grid_points, 100);
    const auto phi = [&](double v) {
        const double f = d.pdf(v);
        if (!(f > 0.0)) return v;  // survival 0 edge of a bounded support
        return v - d.survival(v) / f;
    };
    double prev_x = lo, prev_phi = phi(lo);
    if (prev_phi >= 0.0) return lo;
    for (int j = 1; j < n; ++j) {
        const double x = lo + (hi - lo) * j / (n - 1);
        const double p = phi(x);
        if (p >= 0.0)
            return bisect_root(phi, prev_x, x, prev_phi, p, 1e-12 * std::max(1.0, hi));
        prev_x = x;
        prev_phi = p;
    }
    throw NumericFailure("virtual value has no zero below the truncated support end for " + d.spec());
}

}  // namespace marketeq
