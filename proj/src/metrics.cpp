#include "fcm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fcm {

std::string_view to_string(ConceptClass c) {
    switch (c) {
    case ConceptClass::Transmitter: return "transmitter";
    case ConceptClass::Receiver: return "receiver";
    case ConceptClass::Ordinary: return "ordinary";
    }
    return "ordinary";
}

namespace {

struct Degrees {
    std::vector<std::size_t> in_count, out_count;
    std::vector<double> in_weight, out_weight;
};

Degrees degrees(const FcmModel& model) {
    const auto n = model.size();
    Degrees d{std::vector<std::size_t>(n), std::vector<std::size_t>(n), std::vector<double>(n),
              std::vector<double>(n)};
    for (const auto& e : model.edges()) {
        const auto s = model.require_index(e.source);
        const auto t = model.require_index(e.target);
        ++d.out_count[s];
        ++d.in_count[t];
        d.out_weight[s] += std::abs(e.weight);
        d.in_weight[t] += std::abs(e.weight);
    }
    return d;
}

Classification classify(const FcmModel& model, const Degrees& d) {
    Classification out;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto& id = model.concepts()[i].id;
        const bool has_in = d.in_count[i] > 0;
        const bool has_out = d.out_count[i] > 0;
        if (!has_in && !has_out) {
            out.isolated.push_back(id);
        } else if (!has_in) {
            out.classes.emplace(id, ConceptClass::Transmitter);
        } else if (!has_out) {
            out.classes.emplace(id, ConceptClass::Receiver);
        } else {
            out.classes.emplace(id, ConceptClass::Ordinary);
        }
    }
    return out;
}

}  // namespace

std::map<ConceptId, double> centrality(const FcmModel& model) {
    const auto d = degrees(model);
    std::map<ConceptId, double> out;
    for (std::size_t i = 0; i < model.size(); ++i)
        out.emplace(model.concepts()[i].id, d.in_weight[i] + d.out_weight[i]);
    return out;
}

Classification classify_concepts(const FcmModel& model) { return classify(model, degrees(model)); }

MetricsReport structural_metrics(const FcmModel& model, DensityDenominator denominator) {
    const auto d = degrees(model);
    auto cls = classify(model, d);

    MetricsReport r;
    const auto n = model.size();
    r.concept_count = n;
    r.connection_count = model.edges().size();
    const double denom = denominator == DensityDenominator::Square
                             ? static_cast<double>(n) * static_cast<double>(n)
                             : static_cast<double>(n) * (static_cast<double>(n) - 1.0);
    r.density = denom > 0.0 ? static_cast<double>(r.connection_count) / denom : 0.0;
    r.connections_per_component =
        n > 0 ? static_cast<double>(r.connection_count) / static_cast<double>(n) : 0.0;

    for (const auto& [id, c] : cls.classes) {
        switch (c) {
        case ConceptClass::Transmitter: ++r.transmitter_count; break;
        case ConceptClass::Receiver: ++r.receiver_count; break;
        case ConceptClass::Ordinary: ++r.ordinary_count; break;
        }
    }
    if (r.transmitter_count > 0) {
        r.complexity_score =
            static_cast<double>(r.receiver_count) / static_cast<double>(r.transmitter_count);
    }

    r.ids = model.ids();
    r.indegree = d.in_weight;
    r.outdegree = d.out_weight;
    r.centrality.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.centrality[i] = d.in_weight[i] + d.out_weight[i];
    r.classes = std::move(cls.classes);
    r.isolated = std::move(cls.isolated);
    return r;
}

std::vector<std::pair<ConceptId, double>> rank_by_centrality(const FcmModel& model,
                                                            std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
    const auto d = degrees(model);
    std::vector<std::size_t> order(model.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto score = [&](std::size_t i) { return d.in_weight[i] + d.out_weight[i]; };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score(a) > score(b); });
    order.resize(std::min(top_k, order.size()));

    std::vector<std::pair<ConceptId, double>> out;
    out.reserve(order.size());
    for (auto i : order) out.emplace_back(model.concepts()[i].id, score(i));
    return out;
}

}  // namespace fcm
