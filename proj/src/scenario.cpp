#include "fcm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>

#include "fcm/json_codec.hpp"

namespace fcm {

ScenarioOutcome run_scenario(const FcmModel& model, const ScenarioSpec& scenario,
                             const InferenceConfig& config) {
    return run_scenario(model, scenario.name, scenario.clamps, scenario.config_override.value_or(config));
}

StructuralIdentity check_structural_equivalence(const std::vector<const FcmModel*>& models) {
    if (models.size() < 2) throw std::invalid_argument("structural comparison needs at least two models");

    using EdgeKey = std::pair<ConceptId, ConceptId>;
    auto edge_set = [](const FcmModel& m) {
        std::set<EdgeKey> out;
        for (const auto& e : m.edges()) out.emplace(e.source, e.target);
        return out;
    };
    auto id_set = [](const FcmModel& m) {
        auto ids = m.ids();
        return std::set<ConceptId>(ids.begin(), ids.end());
    };

    StructuralIdentity r;
    const auto& first = *models.front();
    const auto first_ids = id_set(first);
    const auto first_edges = edge_set(first);
    for (std::size_t k = 1; k < models.size(); ++k) {
        const auto& m = *models[k];
        const auto ids = id_set(m);
        const auto edges = edge_set(m);
        for (const auto& id : first_ids)
            if (!ids.contains(id)) r.concepts_missing.emplace_back(k, id);
        for (const auto& id : ids)
            if (!first_ids.contains(id)) r.concepts_extra.emplace_back(k, id);
        for (const auto& e : first_edges)
            if (!edges.contains(e)) r.edges_missing.emplace_back(k, e);
        for (const auto& e : edges)
            if (!first_edges.contains(e)) r.edges_extra.emplace_back(k, e);
        if (ids == first_ids && m.ids() != first.ids()) r.order_differs = true;
    }
    r.identical = r.concepts_missing.empty() && r.concepts_extra.empty() && r.edges_missing.empty() &&
                  r.edges_extra.empty() && !r.order_differs;
    return r;
}

StructuralIdentity check_structural_equivalence(const std::vector<FcmModel>& models) {
    std::vector<const FcmModel*> ptrs;
    for (const auto& m : models) ptrs.push_back(&m);
    return check_structural_equivalence(ptrs);
}

ComparisonReport compare_scenarios(const std::vector<ScenarioSpec>& scenarios,
                                   const ModelRegistry& models, const InferenceConfig& config,
                                   std::size_t ranking_depth) {
    ComparisonReport report;
    std::vector<const FcmModel*> resolved;
    std::vector<const FcmModel*> distinct;
    std::set<std::string> names;
    for (const auto& s : scenarios) {
        if (!names.insert(s.name).second) throw ResolutionError("duplicate scenario name '" + s.name + "'");
        auto it = models.find(s.model_ref);
        if (it == models.end())
            throw ResolutionError("scenario '" + s.name + "' references unknown model '" + s.model_ref + "'");
        resolved.push_back(&it->second);
        if (std::find(distinct.begin(), distinct.end(), &it->second) == distinct.end())
            distinct.push_back(&it->second);
        report.scenarios.push_back(s.name);
    }
    if (distinct.size() >= 2) report.structural_identity = check_structural_equivalence(distinct);

    std::vector<std::future<ScenarioOutcome>> pending;
    pending.reserve(scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        pending.push_back(std::async(std::launch::async, [&, i] {
            return run_scenario(*resolved[i], scenarios[i], config);
        }));
    }
    std::vector<ScenarioOutcome> outcomes;
    outcomes.reserve(pending.size());
    for (auto& f : pending) outcomes.push_back(f.get());

    if (!scenarios.empty()) {
        for (const auto& c : resolved.front()->concepts()) {
            ComparisonRow row{c.id, {}};
            for (const auto& o : outcomes) {
                auto pos = std::find(o.ids.begin(), o.ids.end(), c.id);
                if (pos == o.ids.end()) row.changes.emplace_back();
                else row.changes.emplace_back(o.relative_change[static_cast<std::size_t>(pos - o.ids.begin())]);
            }
            report.per_concept_table.push_back(std::move(row));
        }
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (!outcomes[i].converged()) report.non_converged.push_back(scenarios[i].name);
        report.centrality_rankings[scenarios[i].name] = rank_by_centrality(*resolved[i], std::max<std::size_t>(1, ranking_depth));
        report.outcomes.emplace(scenarios[i].name, std::move(outcomes[i]));
    }
    return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
    if (text == "plain" || text == "plain-table" || text == "table") return ReportFormat::PlainTable;
    if (text == "delimited" || text == "csv") return ReportFormat::Delimited;
    if (text == "structured" || text == "json") return ReportFormat::Structured;
    return std::nullopt;
}

namespace {

std::string fixed(double v, int decimals, bool show_sign) {
    char buf[64];
    std::snprintf(buf, sizeof buf, show_sign ? "%+.*f" : "%.*f", decimals, v);
    std::string s(buf);
    // Values that round to zero print unsigned.
    const double rounded = std::strtod(buf, nullptr);
    if (rounded == 0.0) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, 0.0);
        s = buf;
    }
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string pad(const std::string& s, std::size_t width, bool right) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

std::string render_plain(const ComparisonReport& r) {
    std::size_t id_width = 7;  // "concept"
    for (const auto& row : r.per_concept_table) id_width = std::max(id_width, row.id.str().size());
    std::vector<std::size_t> widths;
    for (const auto& s : r.scenarios) widths.push_back(std::max<std::size_t>(s.size(), 6));

    std::ostringstream out;
    out << pad("concept", id_width, false);
    for (std::size_t k = 0; k < r.scenarios.size(); ++k) out << "  " << pad(r.scenarios[k], widths[k], true);
    out << '\n';
    for (const auto& row : r.per_concept_table) {
        out << pad(row.id.str(), id_width, false);
        for (std::size_t k = 0; k < row.changes.size(); ++k) {
            const auto& v = row.changes[k];
            out << "  " << pad(v ? fixed(*v, 2, true) : "n/a", widths[k], true);
        }
        out << '\n';
    }
    if (r.scenarios.empty()) return out.str();

    out << '\n';
    for (const auto& name : r.scenarios) {
        const auto& o = r.outcomes.at(name);
        out << name << ": baseline " << to_string(o.baseline.status) << " (" << o.baseline.iterations
            << " it), clamped " << to_string(o.clamped.status) << " (" << o.clamped.iterations << " it)\n";
    }
    out << "structurally identical: " << (r.structural_identity.identical ? "yes" : "no") << '\n';
    out << '\n' << "centrality ranking\n";
    for (const auto& name : r.scenarios) {
        out << name << ':';
        for (const auto& [id, v] : r.centrality_rankings.at(name)) out << ' ' << id.str() << '=' << fixed(v, 2, false);
        out << '\n';
    }
    return out.str();
}

std::string render_delimited(const ComparisonReport& r) {
    std::ostringstream out;
    out << "concept";
    for (const auto& s : r.scenarios) out << ',' << csv_field(s);
    out << '\n';
    for (const auto& row : r.per_concept_table) {
        out << row.id.str();
        for (const auto& v : row.changes) {
            out << ',';
            if (v) out << fixed(*v, 4, false);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string render_report(const ComparisonReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::PlainTable: return render_plain(report);
    case ReportFormat::Delimited: return render_delimited(report);
    case ReportFormat::Structured: return json::encode(report).dump(2) + "\n";
    }
    return {};
}

}  // namespace fcm
