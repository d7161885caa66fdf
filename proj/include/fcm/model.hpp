#pragma once

// Core domain types for fuzzy cognitive maps: concepts, signed weighted
// edges, the model that owns them, and per-concept state vectors.
//
// Models are immutable once built. All construction goes through
// build_model(), which enforces every structural invariant.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fcm {

/// Short concept code such as "P1" or "I5".
class ConceptId {
public:
    ConceptId() = default;
    explicit ConceptId(std::string code) : code_(std::move(code)) {}

    const std::string& str() const noexcept { return code_; }
    bool empty() const noexcept { return code_.empty(); }

    friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
    friend bool operator==(const ConceptId&, const ConceptId&) = default;

private:
    std::string code_;
};

/// True when the code can appear in every interchange format unquoted.
bool is_valid_concept_code(std::string_view code);

enum class ConceptGroup {
    Politics,
    ResearchAndDevelopment,
    Economy,
    CivilSociety,
    Indicator,
};

std::string_view to_string(ConceptGroup group);
std::optional<ConceptGroup> parse_concept_group(std::string_view text);
/// Group implied by the leading letter of a code (P, R, E, S, I); Indicator otherwise.
ConceptGroup group_from_code(std::string_view code);

struct Concept {
    ConceptId id;
    std::string name;
    ConceptGroup group = ConceptGroup::Indicator;
    std::string description;

    friend bool operator==(const Concept&, const Concept&) = default;
};

struct Edge {
    ConceptId source;
    ConceptId target;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class ViolationKind {
    EmptyConceptId,
    InvalidConceptId,
    DuplicateConceptId,
    UnknownEndpoint,
    SelfLoop,
    WeightOutOfRange,
    DuplicateEdge,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<ConceptId> ids;  // implicated concept ids (edge endpoints in source, target order)
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Thrown by build_model; carries the first violation found.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(Violation v);
    const Violation& violation() const noexcept { return violation_; }
    ViolationKind kind() const noexcept { return violation_.kind; }

private:
    Violation violation_;
};

class FcmModel;

FcmModel build_model(std::string name, std::vector<Concept> concepts, std::vector<Edge> edges);

/// Checks the invariants of an arbitrary set of parts; empty result iff build_model would succeed.
std::vector<Violation> validate_parts(const std::vector<Concept>& concepts,
                                      const std::vector<Edge>& edges);

class FcmModel {
public:
    FcmModel() = default;

    const std::string& name() const noexcept { return name_; }
    const std::vector<Concept>& concepts() const noexcept { return concepts_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return concepts_.size(); }

    std::optional<std::size_t> index_of(const ConceptId& id) const;
    /// Throws std::out_of_range for unknown ids.
    std::size_t require_index(const ConceptId& id) const;
    bool contains(const ConceptId& id) const { return index_of(id).has_value(); }
    std::optional<double> weight(const ConceptId& source, const ConceptId& target) const;

    std::vector<ConceptId> ids() const;

    /// Same parts, different name.
    FcmModel renamed(std::string name) const;

    friend bool operator==(const FcmModel& a, const FcmModel& b) {
        return a.name_ == b.name_ && a.concepts_ == b.concepts_ && a.edges_ == b.edges_;
    }

private:
    friend FcmModel build_model(std::string, std::vector<Concept>, std::vector<Edge>);

    std::string name_;
    std::vector<Concept> concepts_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::vector<Violation> validate_model(const FcmModel& model);

/// Activation per concept, aligned with a model's concept order.
struct StateVector {
    std::vector<ConceptId> ids;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    /// Throws std::out_of_range for unknown ids.
    double at(const ConceptId& id) const;
    std::map<ConceptId, double> to_map() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;
};

using Clamps = std::map<ConceptId, double>;

}  // namespace fcm

template <>
struct std::hash<fcm::ConceptId> {
    std::size_t operator()(const fcm::ConceptId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
