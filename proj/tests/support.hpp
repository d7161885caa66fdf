#pragma once

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "fcm/inference.hpp"
#include "fcm/model.hpp"

namespace fcm::test {

inline ConceptId id(const char* s) { return ConceptId(s); }

inline FcmModel make_model(const std::vector<std::string>& ids,
                           const std::vector<std::tuple<std::string, std::string, double>>& edges,
                           std::string name = "m") {
    std::vector<Concept> cs;
    for (const auto& s : ids) cs.push_back({ConceptId(s), s, group_from_code(s), {}});
    std::vector<Edge> es;
    for (const auto& [a, b, w] : edges) es.push_back({ConceptId(a), ConceptId(b), w});
    return build_model(std::move(name), std::move(cs), std::move(es));
}

/// Random model: n concepts C0.., each ordered pair present with probability p,
/// weights uniform in [-1, 1] and snapped to 0.05 steps half the time.
inline FcmModel random_model(std::mt19937& rng, int n, double p) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("C" + std::to_string(i));
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::bernoulli_distribution present(p), snap(0.5);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !present(rng)) continue;
            double v = w(rng);
            if (snap(rng)) v = std::round(v * 20.0) / 20.0;
            edges.emplace_back(ids[i], ids[j], v);
        }
    return make_model(ids, edges, "random");
}

inline InferenceConfig random_config(std::mt19937& rng) {
    static const KernelKind kernels[] = {KernelKind::Kosko, KernelKind::ModifiedKosko, KernelKind::Rescaled};
    static const SquashKind squashes[] = {SquashKind::Logistic, SquashKind::HyperbolicTangent, SquashKind::LinearClip};
    static const double steep[] = {0.5, 1.0, 2.0, 5.0};
    InferenceConfig c;
    c.kernel = kernels[rng() % 3];
    c.squash = {squashes[rng() % 3], steep[rng() % 4]};
    c.max_iterations = 200;
    return c;
}

inline Clamps random_clamps(std::mt19937& rng, const FcmModel& m) {
    Clamps c;
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    for (const auto& x : m.concepts())
        if (rng() % 4 == 0) c[x.id] = v(rng);
    return c;
}

/// Random byte-level edits: deletions, insertions, substitutions, duplications, truncation.
inline std::string mutate(std::mt19937& rng, std::string s) {
    static const std::string alphabet = ",\n\r\"{}[]:-.0123456789eE+ abcPRI<>/=&;\t";
    const int edits = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < edits; ++k) {
        if (s.empty()) {
            s.push_back(alphabet[rng() % alphabet.size()]);
            continue;
        }
        const std::size_t pos = rng() % s.size();
        switch (rng() % 5) {
        case 0: s.erase(pos, 1 + rng() % 8); break;
        case 1: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        case 2: s[pos] = alphabet[rng() % alphabet.size()]; break;
        case 3: s.insert(pos, s.substr(rng() % s.size(), rng() % 16)); break;
        default: s.resize(pos); break;
        }
    }
    return s;
}

}  // namespace fcm::test
