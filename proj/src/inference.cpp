#include "fcm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fcm {

std::string_view to_string(SquashKind kind) {
    switch (kind) {
    case SquashKind::Logistic: return "logistic";
    case SquashKind::HyperbolicTangent: return "tanh";
    case SquashKind::LinearClip: return "linear-clip";
    }
    return "tanh";
}

std::string_view to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::Kosko: return "kosko";
    case KernelKind::ModifiedKosko: return "modified-kosko";
    case KernelKind::Rescaled: return "rescaled";
    }
    return "kosko";
}

std::optional<SquashKind> parse_squash_kind(std::string_view text) {
    if (text == "logistic" || text == "sigmoid") return SquashKind::Logistic;
    if (text == "tanh" || text == "hyperbolic-tangent") return SquashKind::HyperbolicTangent;
    if (text == "linear-clip" || text == "linear") return SquashKind::LinearClip;
    return std::nullopt;
}

std::optional<KernelKind> parse_kernel_kind(std::string_view text) {
    if (text == "kosko") return KernelKind::Kosko;
    if (text == "modified-kosko") return KernelKind::ModifiedKosko;
    if (text == "rescaled") return KernelKind::Rescaled;
    return std::nullopt;
}

std::string_view to_string(InferenceError::Kind kind) {
    switch (kind) {
    case InferenceError::Kind::UnknownClampId: return "UnknownClampId";
    case InferenceError::Kind::ClampOutOfRange: return "ClampOutOfRange";
    case InferenceError::Kind::StateMismatch: return "StateMismatch";
    }
    return "Unknown";
}

std::string_view to_string(RunStatus status) {
    switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::LimitCycle: return "limit-cycle";
    case RunStatus::MaxIterationsReached: return "max-iterations-reached";
    }
    return "max-iterations-reached";
}

void validate_config(const InferenceConfig& config) {
    if (!(config.squash.steepness > 0.0) || !std::isfinite(config.squash.steepness))
        throw std::invalid_argument("steepness must be a positive finite number");
    if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance))
        throw std::invalid_argument("tolerance must be a positive finite number");
    if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (config.cycle_detection_window < 1)
        throw std::invalid_argument("cycle_detection_window must be >= 1");
    if (const auto* a = std::get_if<double>(&config.initial_activation)) {
        if (!(*a >= -1.0 && *a <= 1.0))
            throw std::invalid_argument("initial_activation must lie in [-1, 1]");
    }
}

double ScenarioOutcome::change(const ConceptId& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return relative_change[i];
    }
    throw std::out_of_range("outcome has no concept '" + id.str() + "'");
}

double squash(double x, const SquashSpec& spec) {
    switch (spec.kind) {
    case SquashKind::Logistic: {
        // 2*sigma(lx) - 1 evaluated on |lx| so exp never overflows and oddness is exact.
        const double y = spec.steepness * std::abs(x);
        const double v = -std::expm1(-y) / (1.0 + std::exp(-y));
        return std::signbit(x) ? -v : v;
    }
    case SquashKind::HyperbolicTangent:
        return std::tanh(spec.steepness * x);
    case SquashKind::LinearClip:
        return std::clamp(x, -1.0, 1.0);
    }
    return 0.0;
}

double neutral_activation(const SquashSpec& spec) { return squash(0.0, spec); }

namespace {

struct Incoming {
    std::size_t source;
    double weight;
};

// Incoming edge lists per target, in edge declaration order.
std::vector<std::vector<Incoming>> incoming_lists(const FcmModel& model) {
    std::vector<std::vector<Incoming>> in(model.size());
    for (const auto& e : model.edges()) {
        in[model.require_index(e.target)].push_back({model.require_index(e.source), e.weight});
    }
    return in;
}

// Clamp indices/values resolved against the model, validated.
std::vector<std::pair<std::size_t, double>> resolve_clamps(const FcmModel& model,
                                                           const Clamps& clamps) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(clamps.size());
    for (const auto& [id, value] : clamps) {
        auto idx = model.index_of(id);
        if (!idx) {
            throw InferenceError(InferenceError::Kind::UnknownClampId, id,
                                 "clamp references unknown concept '" + id.str() + "'");
        }
        if (!(value >= -1.0 && value <= 1.0)) {
            throw InferenceError(InferenceError::Kind::ClampOutOfRange, id,
                                 "clamp on '" + id.str() + "' = " + std::to_string(value) +
                                     " outside [-1, 1]");
        }
        out.emplace_back(*idx, value);
    }
    return out;
}

class Stepper {
public:
    Stepper(const FcmModel& model, const InferenceConfig& config, const Clamps& clamps)
        : config_(config), incoming_(incoming_lists(model)), clamps_(resolve_clamps(model, clamps)) {}

    void impose(std::vector<double>& a) const {
        for (const auto& [i, v] : clamps_) a[i] = v;
    }

    void advance(const std::vector<double>& a, std::vector<double>& next) const {
        const auto n = a.size();
        next.resize(n);
        const bool rescale = config_.kernel == KernelKind::Rescaled;
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (const auto& [j, w] : incoming_[i]) sum += w * (rescale ? 2.0 * a[j] - 1.0 : a[j]);
            switch (config_.kernel) {
            case KernelKind::Kosko: break;
            case KernelKind::ModifiedKosko: sum += a[i]; break;
            case KernelKind::Rescaled: sum += 2.0 * a[i] - 1.0; break;
            }
            next[i] = squash(sum, config_.squash);
        }
        impose(next);
    }

private:
    const InferenceConfig& config_;
    std::vector<std::vector<Incoming>> incoming_;
    std::vector<std::pair<std::size_t, double>> clamps_;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void check_state(const FcmModel& model, const StateVector& state) {
    if (state.values.size() != model.size() || state.ids.size() != model.size()) {
        throw InferenceError(InferenceError::Kind::StateMismatch, {},
                             "state vector size does not match the model");
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (state.ids[i] != model.concepts()[i].id) {
            throw InferenceError(InferenceError::Kind::StateMismatch, state.ids[i],
                                 "state vector order differs from model concept order at '" +
                                     state.ids[i].str() + "'");
        }
    }
}

}  // namespace

StateVector initial_state(const FcmModel& model, const InferenceConfig& config,
                          const Clamps& clamps) {
    validate_config(config);
    const double start = std::holds_alternative<NeutralActivation>(config.initial_activation)
                             ? neutral_activation(config.squash)
                             : std::get<double>(config.initial_activation);
    StateVector s{model.ids(), std::vector<double>(model.size(), start)};
    for (const auto& [i, v] : resolve_clamps(model, clamps)) s.values[i] = v;
    return s;
}

StateVector step(const FcmModel& model, const StateVector& state, const InferenceConfig& config,
                 const Clamps& clamps) {
    validate_config(config);
    check_state(model, state);
    Stepper stepper(model, config, clamps);
    StateVector out{state.ids, {}};
    stepper.advance(state.values, out.values);
    return out;
}

SteadyStateResult run_to_steady_state(const FcmModel& model, const InferenceConfig& config,
                                      const Clamps& clamps) {
    return run_to_steady_state(model, config, clamps, initial_state(model, config));
}

SteadyStateResult run_to_steady_state(const FcmModel& model, const InferenceConfig& config,
                                      const Clamps& clamps, const StateVector& start) {
    validate_config(config);
    check_state(model, start);
    Stepper stepper(model, config, clamps);

    const auto ids = model.ids();
    std::vector<double> current = start.values;
    stepper.impose(current);

    SteadyStateResult result;
    if (config.record_trajectory) result.trajectory.emplace().push_back({ids, current});

    // history.front() is the current state, older states follow.
    std::deque<std::vector<double>> history;
    history.push_front(current);
    std::vector<double> next;

    for (int it = 1; it <= config.max_iterations; ++it) {
        stepper.advance(history.front(), next);
        if (config.record_trajectory) result.trajectory->push_back({ids, next});
        result.iterations = it;

        if (max_abs_diff(next, history.front()) < config.tolerance) {
            result.status = RunStatus::Converged;
            result.final_state = {ids, next};
            return result;
        }
        for (std::size_t lag = 1; lag < history.size(); ++lag) {
            if (max_abs_diff(next, history[lag]) < config.tolerance) {
                result.status = RunStatus::LimitCycle;
                result.period = static_cast<int>(lag) + 1;
                result.final_state = {ids, next};
                return result;
            }
        }
        history.push_front(next);
        if (history.size() > static_cast<std::size_t>(config.cycle_detection_window))
            history.pop_back();
    }
    result.status = RunStatus::MaxIterationsReached;
    result.final_state = {ids, history.front()};
    return result;
}

ScenarioOutcome run_scenario(const FcmModel& model, std::string scenario_name,
                             const Clamps& clamps, const InferenceConfig& config) {
    ScenarioOutcome out;
    out.scenario_name = std::move(scenario_name);
    out.baseline = run_to_steady_state(model, config, {});
    out.clamped = run_to_steady_state(model, config, clamps);
    out.ids = model.ids();
    out.relative_change.resize(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        out.relative_change[i] = out.clamped.final_state.values[i] - out.baseline.final_state.values[i];
    }
    return out;
}

}  // namespace fcm
