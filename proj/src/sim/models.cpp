#include "letf/sim/models.hpp"

#include <cmath>

#include "letf/error.hpp"

namespace letf::sim {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw_config("invalid-params", what);
}

}  // namespace

void validate(const IIDParams& p) {
    require(std::isfinite(p.mu), "iid mu must be finite");
    require(p.sigma > 0.0 && std::isfinite(p.sigma), "iid sigma must be > 0");
}

void validate(const AR1Params& p) {
    require(std::abs(p.phi) < 1.0, "AR(1) requires |phi| < 1");
    require(p.sigma_eps > 0.0 && std::isfinite(p.sigma_eps), "AR(1) sigma must be > 0");
    require(std::isfinite(p.intercept), "AR(1) intercept must be finite");
}

void validate(const ArGarchParams& p) {
    require(std::isfinite(p.mu), "GARCH mu must be finite");
    require(std::abs(p.phi) < 1.0, "GARCH AR term requires |phi| < 1");
    require(p.omega > 0.0 && std::isfinite(p.omega), "GARCH omega must be > 0");
    require(p.alpha >= 0.0, "GARCH alpha must be >= 0");
    require(p.beta_g >= 0.0, "GARCH beta must be >= 0");
    require(p.alpha + p.beta_g < 1.0, "GARCH requires alpha + beta < 1");
}

void validate(const RegimeModel& m) {
    const std::size_t n = m.size();
    require(n >= 1, "regime model needs at least one regime");
    require(m.sigma.size() == n && m.initial.size() == n && m.generator.size() == n * n,
            "regime model arrays disagree on the number of regimes");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        require(std::isfinite(m.mu[i]), "regime drift must be finite");
        require(m.sigma[i] > 0.0 && std::isfinite(m.sigma[i]), "regime volatility must be > 0");
        require(m.initial[i] >= 0.0, "initial distribution entries must be >= 0");
        total += m.initial[i];
        double row = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double q = m.rate(i, j);
            require(std::isfinite(q), "generator entries must be finite");
            if (i != j) require(q >= 0.0, "off-diagonal generator entries must be >= 0");
            row += q;
            scale += std::abs(q);
        }
        require(std::abs(row) <= 1e-9 * std::max(1.0, scale), "generator rows must sum to 0");
    }
    require(std::abs(total - 1.0) <= 1e-9, "initial distribution must sum to 1");
}

void validate(const ModelParams& m) {
    std::visit([](const auto& p) { validate(p); }, m);
}

std::string model_tag(const ModelParams& m) {
    struct Tag {
        std::string operator()(const IIDParams&) const { return "iid"; }
        std::string operator()(const AR1Params&) const { return "ar1"; }
        std::string operator()(const ArGarchParams&) const { return "ar1-garch"; }
        std::string operator()(const RegimeModel&) const { return "regime-gbm"; }
    };
    return std::visit(Tag{}, m);
}

std::string scale_note(const ModelParams& m) {
    if (std::holds_alternative<ArGarchParams>(m))
        return "params in percent; simulated returns divided by 100 before compounding";
    return "decimal returns";
}

}  // namespace letf::sim
