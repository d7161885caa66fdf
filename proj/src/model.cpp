#include "fcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

namespace fcm {

bool is_valid_concept_code(std::string_view code) {
    if (code.empty()) return false;
    return std::none_of(code.begin(), code.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u <= 0x20 || u == 0x7f || c == ',' || c == '"';
    });
}

std::string_view to_string(ConceptGroup group) {
    switch (group) {
    case ConceptGroup::Politics: return "politics";
    case ConceptGroup::ResearchAndDevelopment: return "research_and_development";
    case ConceptGroup::Economy: return "economy";
    case ConceptGroup::CivilSociety: return "civil_society";
    case ConceptGroup::Indicator: return "indicator";
    }
    return "indicator";
}

std::optional<ConceptGroup> parse_concept_group(std::string_view text) {
    for (auto g : {ConceptGroup::Politics, ConceptGroup::ResearchAndDevelopment,
                   ConceptGroup::Economy, ConceptGroup::CivilSociety, ConceptGroup::Indicator}) {
        if (to_string(g) == text) return g;
    }
    return std::nullopt;
}

ConceptGroup group_from_code(std::string_view code) {
    if (code.empty()) return ConceptGroup::Indicator;
    switch (code.front()) {
    case 'P': return ConceptGroup::Politics;
    case 'R': return ConceptGroup::ResearchAndDevelopment;
    case 'E': return ConceptGroup::Economy;
    case 'S': return ConceptGroup::CivilSociety;
    default: return ConceptGroup::Indicator;
    }
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::EmptyConceptId: return "EmptyConceptId";
    case ViolationKind::InvalidConceptId: return "InvalidConceptId";
    case ViolationKind::DuplicateConceptId: return "DuplicateConceptId";
    case ViolationKind::UnknownEndpoint: return "UnknownEndpoint";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::WeightOutOfRange: return "WeightOutOfRange";
    case ViolationKind::DuplicateEdge: return "DuplicateEdge";
    }
    return "Unknown";
}

ModelError::ModelError(Violation v)
    : std::runtime_error(std::string(to_string(v.kind)) + ": " + v.message),
      violation_(std::move(v)) {}

namespace {

std::string edge_label(const Edge& e) {
    return e.source.str() + "->" + e.target.str();
}

}  // namespace

std::vector<Violation> validate_parts(const std::vector<Concept>& concepts,
                                      const std::vector<Edge>& edges) {
    std::vector<Violation> out;
    std::unordered_set<std::string> seen;
    for (const auto& c : concepts) {
        if (c.id.empty()) {
            out.push_back({ViolationKind::EmptyConceptId, {c.id}, "concept with empty id"});
            continue;
        }
        if (!is_valid_concept_code(c.id.str())) {
            out.push_back({ViolationKind::InvalidConceptId, {c.id},
                           "concept id '" + c.id.str() + "' contains whitespace, ',' or '\"'"});
        }
        if (!seen.insert(c.id.str()).second) {
            out.push_back({ViolationKind::DuplicateConceptId, {c.id},
                           "concept id '" + c.id.str() + "' appears more than once"});
        }
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : edges) {
        for (const auto* end : {&e.source, &e.target}) {
            if (!seen.contains(end->str())) {
                out.push_back({ViolationKind::UnknownEndpoint, {e.source, e.target},
                               "edge " + edge_label(e) + " references unknown concept '" +
                                   end->str() + "'"});
            }
        }
        if (e.source == e.target) {
            out.push_back({ViolationKind::SelfLoop, {e.source, e.target},
                           "self-loop on '" + e.source.str() + "'"});
        }
        if (!(e.weight >= -1.0 && e.weight <= 1.0)) {
            out.push_back({ViolationKind::WeightOutOfRange, {e.source, e.target},
                           "edge " + edge_label(e) + " weight " + std::to_string(e.weight) +
                               " outside [-1, 1]"});
        }
        if (!pairs.emplace(e.source.str(), e.target.str()).second) {
            out.push_back({ViolationKind::DuplicateEdge, {e.source, e.target},
                           "edge " + edge_label(e) + " given more than once"});
        }
    }
    return out;
}

FcmModel build_model(std::string name, std::vector<Concept> concepts, std::vector<Edge> edges) {
    auto violations = validate_parts(concepts, edges);
    if (!violations.empty()) throw ModelError(std::move(violations.front()));

    FcmModel m;
    m.name_ = std::move(name);
    m.concepts_ = std::move(concepts);
    m.edges_ = std::move(edges);
    m.index_.reserve(m.concepts_.size());
    for (std::size_t i = 0; i < m.concepts_.size(); ++i) m.index_.emplace(m.concepts_[i].id.str(), i);
    return m;
}

std::vector<Violation> validate_model(const FcmModel& model) {
    return validate_parts(model.concepts(), model.edges());
}

std::optional<std::size_t> FcmModel::index_of(const ConceptId& id) const {
    auto it = index_.find(id.str());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t FcmModel::require_index(const ConceptId& id) const {
    auto idx = index_of(id);
    if (!idx) throw std::out_of_range("unknown concept id '" + id.str() + "'");
    return *idx;
}

std::optional<double> FcmModel::weight(const ConceptId& source, const ConceptId& target) const {
    for (const auto& e : edges_) {
        if (e.source == source && e.target == target) return e.weight;
    }
    return std::nullopt;
}

std::vector<ConceptId> FcmModel::ids() const {
    std::vector<ConceptId> out;
    out.reserve(concepts_.size());
    for (const auto& c : concepts_) out.push_back(c.id);
    return out;
}

FcmModel FcmModel::renamed(std::string name) const {
    FcmModel copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

double StateVector::at(const ConceptId& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return values.at(i);
    }
    throw std::out_of_range("state has no concept '" + id.str() + "'");
}

std::map<ConceptId, double> StateVector::to_map() const {
    std::map<ConceptId, double> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], values[i]);
    return out;
}

}  // namespace fcm
