#pragma once

// Structural analysis of an FCM viewed as a weighted signed digraph.
//
// Degree counts use structural edges (zero weights included); weighted
// degrees and centrality use |w| so zero-weight edges contribute nothing.

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "fcm/model.hpp"

namespace fcm {

enum class ConceptClass { Transmitter, Receiver, Ordinary };
std::string_view to_string(ConceptClass c);

enum class DensityDenominator {
    NoSelfLoops,  // N * (N - 1)
    Square,       // N * N
};

struct Classification {
    std::map<ConceptId, ConceptClass> classes;  // isolated concepts are absent
    std::vector<ConceptId> isolated;            // model order
};

struct MetricsReport {
    std::size_t concept_count = 0;
    std::size_t connection_count = 0;
    double density = 0.0;
    double connections_per_component = 0.0;
    std::optional<double> complexity_score;  // receivers / transmitters; absent without transmitters
    std::size_t transmitter_count = 0;
    std::size_t receiver_count = 0;
    std::size_t ordinary_count = 0;

    std::vector<ConceptId> ids;  // model order; the per-concept vectors below align with it
    std::vector<double> centrality;
    std::vector<double> indegree;
    std::vector<double> outdegree;
    std::map<ConceptId, ConceptClass> classes;
    std::vector<ConceptId> isolated;
};

/// Sum of |incoming| and |outgoing| weights per concept, in model order.
std::map<ConceptId, double> centrality(const FcmModel& model);

Classification classify_concepts(const FcmModel& model);

MetricsReport structural_metrics(const FcmModel& model,
                                 DensityDenominator denominator = DensityDenominator::NoSelfLoops);

/// Descending by centrality, ties in model concept order.
std::vector<std::pair<ConceptId, double>> rank_by_centrality(const FcmModel& model,
                                                            std::size_t top_k);

}  // namespace fcm
