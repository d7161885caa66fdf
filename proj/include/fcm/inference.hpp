#pragma once

// Fixed-point iteration over an FCM with clamped concepts.
//
// One step computes, for every concept i, an aggregate of the incoming
// weights w_ji (edge j -> i) and the current activations, then squashes it
// back into [-1, 1]. Clamped concepts are re-imposed after every squash.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fcm/model.hpp"

namespace fcm {

enum class SquashKind { Logistic, HyperbolicTangent, LinearClip };
enum class KernelKind { Kosko, ModifiedKosko, Rescaled };

std::string_view to_string(SquashKind kind);
std::string_view to_string(KernelKind kind);
std::optional<SquashKind> parse_squash_kind(std::string_view text);
std::optional<KernelKind> parse_kernel_kind(std::string_view text);

struct SquashSpec {
    SquashKind kind = SquashKind::HyperbolicTangent;
    double steepness = 1.0;  // ignored by LinearClip

    friend bool operator==(const SquashSpec&, const SquashSpec&) = default;
};

struct NeutralActivation {
    friend bool operator==(NeutralActivation, NeutralActivation) = default;
};

/// Either a fixed starting activation or "neutral", i.e. squash(0).
using InitialActivation = std::variant<NeutralActivation, double>;

struct InferenceConfig {
    KernelKind kernel = KernelKind::Rescaled;
    SquashSpec squash{SquashKind::HyperbolicTangent, 0.5};
    InitialActivation initial_activation = NeutralActivation{};
    double tolerance = 1e-5;
    int max_iterations = 1000;
    int cycle_detection_window = 50;
    bool record_trajectory = false;

    friend bool operator==(const InferenceConfig&, const InferenceConfig&) = default;
};

/// Throws std::invalid_argument when a field breaks its invariant.
void validate_config(const InferenceConfig& config);

class InferenceError : public std::runtime_error {
public:
    enum class Kind { UnknownClampId, ClampOutOfRange, StateMismatch };

    InferenceError(Kind kind, ConceptId id, const std::string& what)
        : std::runtime_error(what), kind_(kind), id_(std::move(id)) {}

    Kind kind() const noexcept { return kind_; }
    const ConceptId& id() const noexcept { return id_; }

private:
    Kind kind_;
    ConceptId id_;
};

std::string_view to_string(InferenceError::Kind kind);

enum class RunStatus { Converged, LimitCycle, MaxIterationsReached };
std::string_view to_string(RunStatus status);

struct SteadyStateResult {
    StateVector final_state;
    int iterations = 0;
    RunStatus status = RunStatus::MaxIterationsReached;
    int period = 0;  // > 0 only for LimitCycle
    std::optional<std::vector<StateVector>> trajectory;

    bool converged() const noexcept { return status == RunStatus::Converged; }
};

struct ScenarioOutcome {
    std::string scenario_name;
    SteadyStateResult baseline;
    SteadyStateResult clamped;
    std::vector<ConceptId> ids;            // model concept order
    std::vector<double> relative_change;   // clamped - baseline, aligned with ids

    bool converged() const noexcept { return baseline.converged() && clamped.converged(); }
    double change(const ConceptId& id) const;
};

double squash(double x, const SquashSpec& spec);

/// The squash(0) starting point used by NeutralActivation.
double neutral_activation(const SquashSpec& spec);

/// Initial state implied by config.initial_activation, with clamps imposed.
StateVector initial_state(const FcmModel& model, const InferenceConfig& config,
                          const Clamps& clamps = {});

StateVector step(const FcmModel& model, const StateVector& state, const InferenceConfig& config,
                 const Clamps& clamps = {});

SteadyStateResult run_to_steady_state(const FcmModel& model, const InferenceConfig& config,
                                      const Clamps& clamps = {});

/// Starts from an explicit state instead of config.initial_activation.
SteadyStateResult run_to_steady_state(const FcmModel& model, const InferenceConfig& config,
                                      const Clamps& clamps, const StateVector& start);

ScenarioOutcome run_scenario(const FcmModel& model, std::string scenario_name,
                             const Clamps& clamps, const InferenceConfig& config);

}  // namespace fcm
