#include "ofqn/analytic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ofqn/errors.hpp"

namespace ofqn {

namespace {

void require_probability(double q, const char* name) {
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(q));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
}

} // namespace

void SolvedRates::require_stable(const std::string& switch_name) const {
    if (!is_stable_load(rho_switch)) throw UnstableError(switch_name, rho_switch);
    if (!is_stable_load(rho_controller)) throw UnstableError("controller", rho_controller);
}

bool ChainRates::stable() const noexcept {
    for (const auto& n : nodes)
        if (!is_stable_load(n.rho_switch)) return false;
    return is_stable_load(rho_controller);
}

void ChainRates::require_stable() const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!is_stable_load(nodes[i].rho_switch))
            throw UnstableError("switch " + std::to_string(i + 1), nodes[i].rho_switch);
    if (!is_stable_load(rho_controller)) throw UnstableError("controller", rho_controller);
}

void validate(const NodeParams& node) {
    require_positive(node.lambda, "lambda");
    require_positive(node.mu_switch, "mu_switch");
    require_probability(node.q_nf, "q_nf");
}

void validate(const ControllerParams& ctrl) { require_positive(ctrl.mu_controller, "mu_controller"); }

void validate(const ChainModel& chain) {
    if (chain.nodes.empty()) throw DomainError("chain must contain at least one node");
    for (const auto& n : chain.nodes) validate(n);
    validate(chain.controller);
}

double derive_q_jack(double q_nf) {
    require_probability(q_nf, "q_nf");
    return q_nf / (1.0 + q_nf);
}

SolvedRates solve_rates(const NodeParams& node, const ControllerParams& ctrl) {
    validate(node);
    validate(ctrl);
    SolvedRates r;
    r.gamma_switch = node.lambda * (1.0 + node.q_nf);
    r.gamma_controller = node.q_nf * node.lambda;
    r.q_jack = derive_q_jack(node.q_nf);
    r.rho_switch = r.gamma_switch / node.mu_switch;
    r.rho_controller = r.gamma_controller / ctrl.mu_controller;
    return r;
}

SolvedRates jackson_balance(double lambda, double feedback_probability, double mu_switch,
                            double mu_controller) {
    require_positive(lambda, "lambda");
    require_positive(mu_switch, "mu_switch");
    require_positive(mu_controller, "mu_controller");
    require_probability(feedback_probability, "feedback probability");
    if (feedback_probability >= 1.0)
        throw UndefinedError("Jackson balance has no solution for feedback probability 1");
    SolvedRates r;
    r.gamma_switch = lambda / (1.0 - feedback_probability);
    r.gamma_controller = feedback_probability * r.gamma_switch;
    r.q_jack = feedback_probability;
    r.rho_switch = r.gamma_switch / mu_switch;
    r.rho_controller = r.gamma_controller / mu_controller;
    return r;
}

double mean_sojourn_jackson(const SolvedRates& rates, const NodeParams& node) {
    require_positive(node.lambda, "lambda");
    rates.require_stable();
    const double rl = rates.rho_switch;
    const double rc = rates.rho_controller;
    return (1.0 / node.lambda) * (rl / (1.0 - rl) + rc / (1.0 - rc));
}

double mean_sojourn_openflow(const NodeParams& node, const ControllerParams& ctrl,
                             const SolvedRates& rates) {
    validate(node);
    validate(ctrl);
    rates.require_stable();
    return (1.0 + node.q_nf) / (node.mu_switch - rates.gamma_switch) +
           node.q_nf / (ctrl.mu_controller - rates.gamma_controller);
}

double mean_sojourn_naive_jackson(const NodeParams& node, const ControllerParams& ctrl) {
    // Undefined takes precedence: at q_nf = 1 the naive rate for a given
    // controller load is zero, which would otherwise read as a domain error.
    if (node.q_nf == 1.0) throw UndefinedError("naive Jackson model is undefined for q_nf = 1");
    validate(node);
    validate(ctrl);
    const SolvedRates naive = jackson_balance(node.lambda, node.q_nf, node.mu_switch, ctrl.mu_controller);
    return mean_sojourn_jackson(naive, node);
}

ChainRates solve_chain(const ChainModel& chain) {
    validate(chain);
    ChainRates out;
    out.nodes.reserve(chain.nodes.size());
    double upstream = 0.0;
    for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
        const NodeParams& n = chain.nodes[i];
        SolvedRates r;
        r.gamma_switch = i == 0 ? n.lambda * (1.0 + n.q_nf) : upstream + n.lambda * (1.0 + n.q_nf);
        r.gamma_controller = n.q_nf * n.lambda;
        r.q_jack = i == 0 ? derive_q_jack(n.q_nf) : n.q_nf * n.lambda / r.gamma_switch;
        r.rho_switch = r.gamma_switch / n.mu_switch;
        out.gamma_controller += r.gamma_controller;
        out.nodes.push_back(r);
        upstream += n.lambda;
    }
    out.rho_controller = out.gamma_controller / chain.controller.mu_controller;
    for (auto& r : out.nodes) r.rho_controller = out.rho_controller;
    return out;
}

ChainSojourn chain_sojourn(const ChainModel& chain, const ChainRates& rates) {
    validate(chain);
    if (rates.nodes.size() != chain.nodes.size())
        throw DomainError("rates do not belong to this chain");
    rates.require_stable();

    const std::size_t n = chain.nodes.size();
    std::vector<double> station(n);
    for (std::size_t j = 0; j < n; ++j)
        station[j] = 1.0 / (chain.nodes[j].mu_switch - rates.nodes[j].gamma_switch);

    ChainSojourn out;
    out.per_class.resize(n);
    double weighted = 0.0;
    double total_lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const NodeParams& node = chain.nodes[i];
        double w = (1.0 + node.q_nf) / (node.mu_switch - rates.nodes[i].gamma_switch) +
                   node.q_nf / (chain.controller.mu_controller - rates.gamma_controller);
        for (std::size_t j = i + 1; j < n; ++j) w += station[j];
        out.per_class[i] = w;
        weighted += node.lambda * w;
        total_lambda += node.lambda;
    }
    out.aggregate = weighted / total_lambda;
    return out;
}

double mean_sojourn_openflow_unchecked(double lambda, double q_nf, double mu_switch,
                                       double mu_controller) noexcept {
    const double gl = lambda * (1.0 + q_nf);
    const double gc = q_nf * lambda;
    if (gl >= mu_switch || gc >= mu_controller) return std::numeric_limits<double>::infinity();
    return (1.0 + q_nf) / (mu_switch - gl) + q_nf / (mu_controller - gc);
}

} // namespace ofqn
