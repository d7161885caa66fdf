#include "fcm/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fcm/json_codec.hpp"

namespace fcm::io {

std::string_view to_string(ParseError::Kind kind) {
    switch (kind) {
    case ParseError::Kind::Empty: return "Empty";
    case ParseError::Kind::RaggedRow: return "RaggedRow";
    case ParseError::Kind::HeaderMismatch: return "HeaderMismatch";
    case ParseError::Kind::MalformedNumber: return "MalformedNumber";
    case ParseError::Kind::WeightOutOfRange: return "WeightOutOfRange";
    case ParseError::Kind::InvalidConcept: return "InvalidConcept";
    }
    return "Unknown";
}

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at line " + std::to_string(line) +
                         (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                         detail),
      kind_(kind), line_(line), column_(column) {}

SchemaError::SchemaError(Kind kind, std::string path, const std::string& reason)
    : std::runtime_error(
          std::string(kind == Kind::UnsupportedVersion ? "UnsupportedVersion" : "SchemaViolation") +
          " at '" + (path.empty() ? std::string("/") : path) + "': " + reason),
      kind_(kind), path_(std::move(path)) {}

ImportError::ImportError(Kind kind, const std::string& what, std::vector<Violation> violations)
    : std::runtime_error(what), kind_(kind), violations_(std::move(violations)) {}

std::string format_weight(double w) {
    if (w == 0.0) return "0";
    std::array<char, 512> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), w, std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("cannot format weight");
    return std::string(buf.data(), end);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty() || s.front() == '+') return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

FcmModel parse_matrix_delimited(std::string_view text, std::string model_name) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(ParseError::Kind::Empty, 1, 0, "no header row");

    const auto header = split_cells(lines[0]);
    const std::size_t n = header.size() - 1;
    std::vector<Concept> concepts;
    std::set<std::string_view> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (!is_valid_concept_code(header[c]))
            throw ParseError(ParseError::Kind::InvalidConcept, 1, c + 1,
                             "invalid concept id '" + std::string(header[c]) + "'");
        if (!seen.insert(header[c]).second)
            throw ParseError(ParseError::Kind::InvalidConcept, 1, c + 1,
                             "duplicate concept id '" + std::string(header[c]) + "'");
        std::string id(header[c]);
        concepts.push_back({ConceptId(id), id, group_from_code(id), {}});
    }

    if (lines.size() - 1 != n) {
        const std::size_t line_no = lines.size() > n + 1 ? n + 2 : lines.size() + 1;
        throw ParseError(ParseError::Kind::HeaderMismatch, line_no, 1,
                         "header lists " + std::to_string(n) + " concepts but " +
                             std::to_string(lines.size() - 1) + " rows follow");
    }

    std::vector<Edge> edges;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t line_no = r + 2;
        const auto cells = split_cells(lines[r + 1]);
        if (cells.size() != n + 1) {
            throw ParseError(ParseError::Kind::RaggedRow, line_no, 0,
                             "expected " + std::to_string(n + 1) + " cells, found " +
                                 std::to_string(cells.size()));
        }
        if (cells[0] != header[r + 1]) {
            throw ParseError(ParseError::Kind::HeaderMismatch, line_no, 1,
                             "row id '" + std::string(cells[0]) + "' does not match column id '" +
                                 std::string(header[r + 1]) + "'");
        }
        for (std::size_t c = 1; c <= n; ++c) {
            if (cells[c].empty()) continue;
            auto v = parse_number(cells[c]);
            if (!v) {
                throw ParseError(ParseError::Kind::MalformedNumber, line_no, c + 1,
                                 "'" + std::string(cells[c]) + "' is not a number");
            }
            if (*v < -1.0 || *v > 1.0) {
                throw ParseError(ParseError::Kind::WeightOutOfRange, line_no, c + 1,
                                 "weight " + std::string(cells[c]) + " outside [-1, 1]");
            }
            if (r + 1 == c) {
                throw ParseError(ParseError::Kind::InvalidConcept, line_no, c + 1,
                                 "self-loop on '" + std::string(cells[0]) + "'");
            }
            edges.push_back({concepts[r].id, concepts[c - 1].id, *v});
        }
    }
    return build_model(std::move(model_name), std::move(concepts), std::move(edges));
}

std::string write_matrix_delimited(const FcmModel& model) {
    const auto n = model.size();
    std::vector<std::optional<double>> grid(n * n);
    for (const auto& e : model.edges())
        grid[model.require_index(e.source) * n + model.require_index(e.target)] = e.weight;

    std::string out = "concept";
    for (const auto& c : model.concepts()) out += "," + c.id.str();
    out += '\n';
    for (std::size_t r = 0; r < n; ++r) {
        out += model.concepts()[r].id.str();
        for (std::size_t c = 0; c < n; ++c) {
            out += ',';
            if (const auto& w = grid[r * n + c]) out += format_weight(*w);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::optional<std::array<int, 3>> parse_semver(std::string_view v) {
    std::array<int, 3> parts{};
    std::size_t idx = 0;
    const char* p = v.data();
    const char* end = v.data() + v.size();
    while (idx < 3) {
        auto [next, ec] = std::from_chars(p, end, parts[idx]);
        if (ec != std::errc{} || parts[idx] < 0) return std::nullopt;
        p = next;
        ++idx;
        if (idx < 3) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
    }
    if (p != end) return std::nullopt;
    return parts;
}

}  // namespace

ModelDocument read_document(std::string_view text) {
    json::json j;
    try {
        j = json::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(SchemaError::Kind::SchemaViolation, "",
                          "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) throw SchemaError(SchemaError::Kind::SchemaViolation, "", "expected an object");

    auto version_it = j.find("format_version");
    if (version_it == j.end())
        throw SchemaError(SchemaError::Kind::SchemaViolation, "", "format_version is missing");
    if (!version_it->is_string())
        throw SchemaError(SchemaError::Kind::SchemaViolation, "/format_version", "expected a string");
    ModelDocument doc;
    doc.format_version = version_it->get<std::string>();
    auto semver = parse_semver(doc.format_version);
    if (!semver)
        throw SchemaError(SchemaError::Kind::SchemaViolation, "/format_version",
                          "expected MAJOR.MINOR.PATCH, got '" + doc.format_version + "'");
    if ((*semver)[0] != 1)
        throw SchemaError(SchemaError::Kind::UnsupportedVersion, "/format_version",
                          "format_version " + doc.format_version + " is not supported (major 1 expected)");

    auto model_it = j.find("model");
    if (model_it == j.end())
        throw SchemaError(SchemaError::Kind::SchemaViolation, "/model", "required field is missing");
    doc.model = json::decode_model(*model_it, "/model");

    if (auto it = j.find("scenarios"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw SchemaError(SchemaError::Kind::SchemaViolation, "/scenarios", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto path = "/scenarios/" + std::to_string(i);
            auto s = json::decode_scenario((*it)[i], path);
            if (s.model_ref.empty()) s.model_ref = doc.model.name();
            for (const auto& [id, v] : s.clamps) {
                if (!doc.model.contains(id))
                    throw SchemaError(SchemaError::Kind::SchemaViolation, path + "/clamps/" + id.str(),
                                      "clamp references unknown concept '" + id.str() + "'");
            }
            doc.scenarios.push_back(std::move(s));
        }
    }
    if (auto it = j.find("config"); it != j.end() && !it->is_null())
        doc.config = json::decode_config(*it, "/config");

    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "format_version" && k != "model" && k != "scenarios" && k != "config")
            doc.extras[k] = it.value();
    }
    return doc;
}

std::string write_document(const ModelDocument& doc) {
    json::json j;
    j["format_version"] = doc.format_version;
    j["model"] = json::encode(doc.model);
    if (!doc.scenarios.empty()) {
        json::json arr = json::json::array();
        for (const auto& s : doc.scenarios) arr.push_back(json::encode(s));
        j["scenarios"] = std::move(arr);
    }
    if (doc.config) j["config"] = json::encode(*doc.config);
    for (auto it = doc.extras.begin(); it != doc.extras.end(); ++it) j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

namespace {

namespace pt = boost::property_tree;

std::string child_text(const pt::ptree& node, const std::string& key) {
    auto c = node.get_child_optional(key);
    if (!c) return {};
    return std::string(trim(c->data()));
}

// A usable concept code: the trimmed text itself when valid, else a sanitized version.
std::string to_code(std::string text) {
    std::string out;
    for (char c : text) {
        if (c == ',' || c == '"' || static_cast<unsigned char>(c) <= 0x20 || c == 0x7f) out += '_';
        else out += c;
    }
    return out;
}

}  // namespace

XmlImport import_mentalmodeler_xml(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ImportError(ImportError::Kind::XmlMalformed,
                          "XmlMalformed at line " + std::to_string(e.line()) + ": " + e.message());
    }

    XmlImport result;
    auto& warnings = result.warnings;

    // Root may be <mentalmodeler> or the concepts list may sit at top level.
    const pt::ptree* root = &tree;
    std::string model_name;
    if (auto mm = tree.get_child_optional("mentalmodeler")) {
        root = &*mm;
        model_name = child_text(*root, "info.name");
        if (model_name.empty()) model_name = child_text(*root, "info.title");
    }
    auto concepts_node = root->get_child_optional("concepts");
    if (!concepts_node) throw ImportError(ImportError::Kind::NoConceptsFound, "NoConceptsFound: no <concepts> element");

    static const std::set<std::string> known_concept_fields = {
        "id", "name", "notes", "units", "group", "preferredState", "x", "y", "relationships", "<xmlattr>"};
    static const std::set<std::string> known_rel_fields = {"id", "name", "influence", "influenceType",
                                                           "confidence", "<xmlattr>"};

    struct RawEdge {
        std::string source, target, influence;
    };
    std::vector<Concept> concepts;
    std::map<std::string, std::string> xml_id_to_code;
    std::vector<RawEdge> raw_edges;

    std::size_t index = 0;
    for (const auto& [tag, node] : *concepts_node) {
        if (tag != "concept") {
            if (tag != "<xmlcomment>") warnings.push_back("ignored element <concepts>/<" + tag + ">");
            continue;
        }
        ++index;
        std::string xml_id = child_text(node, "id");
        std::string name = child_text(node, "name");
        if (xml_id.empty()) {
            xml_id = "concept" + std::to_string(index);
            warnings.push_back("concept #" + std::to_string(index) + " has no <id>; using '" + xml_id + "'");
        }
        std::string code = to_code(xml_id);
        if (code != xml_id) warnings.push_back("concept id '" + xml_id + "' sanitized to '" + code + "'");
        xml_id_to_code[xml_id] = code;

        Concept c;
        c.id = ConceptId(code);
        c.name = name.empty() ? code : name;
        c.group = group_from_code(code);
        if (auto g = child_text(node, "group"); !g.empty()) {
            if (auto parsed = parse_concept_group(g)) c.group = *parsed;
            else warnings.push_back("concept '" + code + "': group '" + g + "' not mapped; inferred '" +
                                    std::string(to_string(c.group)) + "'");
        }
        c.description = child_text(node, "notes");
        for (const auto& [field, value] : node) {
            if (!known_concept_fields.contains(field) && field != "<xmlcomment>")
                warnings.push_back("concept '" + code + "': ignored element <" + field + ">");
        }
        concepts.push_back(std::move(c));

        if (auto rels = node.get_child_optional("relationships")) {
            for (const auto& [rtag, rel] : *rels) {
                if (rtag != "relationship") {
                    if (rtag != "<xmlcomment>")
                        warnings.push_back("concept '" + code + "': ignored element <" + rtag + ">");
                    continue;
                }
                raw_edges.push_back({xml_id, child_text(rel, "id"), child_text(rel, "influence")});
                for (const auto& [field, value] : rel) {
                    if (!known_rel_fields.contains(field) && field != "<xmlcomment>")
                        warnings.push_back("relationship from '" + code + "': ignored element <" + field + ">");
                }
            }
        }
    }
    if (concepts.empty()) throw ImportError(ImportError::Kind::NoConceptsFound, "NoConceptsFound: no <concept> elements");

    std::vector<Edge> edges;
    std::vector<Violation> violations;
    for (const auto& re : raw_edges) {
        auto source = xml_id_to_code.at(re.source);
        auto tgt = xml_id_to_code.find(re.target);
        std::string target = tgt == xml_id_to_code.end() ? to_code(re.target) : tgt->second;
        auto weight = parse_number(re.influence);
        if (!weight) {
            violations.push_back({ViolationKind::WeightOutOfRange, {ConceptId(source), ConceptId(target)},
                                  "relationship " + source + "->" + target + " has non-numeric influence '" +
                                      re.influence + "'"});
            continue;
        }
        edges.push_back({ConceptId(source), ConceptId(target.empty() ? "?" : target), *weight});
    }
    auto more = validate_parts(concepts, edges);
    violations.insert(violations.end(), more.begin(), more.end());
    if (!violations.empty()) {
        std::string what = "ImportValidationFailed: " + std::to_string(violations.size()) + " violation(s); first: " +
                           violations.front().message;
        throw ImportError(ImportError::Kind::ImportValidationFailed, what, std::move(violations));
    }

    result.document.model = build_model(model_name, std::move(concepts), std::move(edges));

    if (auto scenarios = root->get_child_optional("scenarios")) {
        for (const auto& [stag, snode] : *scenarios) {
            if (stag != "scenario") continue;
            ScenarioSpec spec;
            spec.name = child_text(snode, "name");
            spec.model_ref = model_name;
            auto sc = snode.get_child_optional("concepts");
            if (sc) {
                for (const auto& [ctag, cnode] : *sc) {
                    if (ctag != "concept") continue;
                    auto selected = child_text(cnode, "selected");
                    if (selected == "false" || selected == "0") continue;
                    auto id = child_text(cnode, "id");
                    auto it = xml_id_to_code.find(id);
                    auto v = parse_number(child_text(cnode, "influence"));
                    if (it == xml_id_to_code.end() || !v || *v < -1.0 || *v > 1.0) {
                        warnings.push_back("scenario '" + spec.name + "': skipped clamp on '" + id + "'");
                        continue;
                    }
                    spec.clamps[ConceptId(it->second)] = *v;
                }
            }
            result.document.scenarios.push_back(std::move(spec));
        }
    }
    for (const auto& [tag, node] : *root) {
        if (tag != "concepts" && tag != "scenarios" && tag != "info" && tag != "<xmlattr>" &&
            tag != "<xmlcomment>")
            warnings.push_back("ignored element <" + tag + ">");
    }
    return result;
}

std::optional<FileFormat> parse_file_format(std::string_view text) {
    if (text == "delimited" || text == "csv") return FileFormat::Delimited;
    if (text == "structured" || text == "json") return FileFormat::Structured;
    if (text == "xml" || text == "mmp" || text == "vendor-xml") return FileFormat::VendorXml;
    return std::nullopt;
}

FileFormat format_from_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".csv" || ext == ".txt") return FileFormat::Delimited;
    if (ext == ".xml" || ext == ".mmp") return FileFormat::VendorXml;
    return FileFormat::Structured;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw FileError("failed writing '" + path.string() + "'");
}

ModelDocument load_document(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    const auto text = read_text_file(path);
    switch (format_from_extension(path)) {
    case FileFormat::Delimited: {
        ModelDocument doc;
        doc.model = parse_matrix_delimited(text, path.stem().string());
        return doc;
    }
    case FileFormat::VendorXml: {
        auto imported = import_mentalmodeler_xml(text);
        if (warnings) *warnings = std::move(imported.warnings);
        if (imported.document.model.name().empty())
            imported.document.model = imported.document.model.renamed(path.stem().string());
        for (auto& s : imported.document.scenarios) s.model_ref = imported.document.model.name();
        return imported.document;
    }
    case FileFormat::Structured:
        return read_document(text);
    }
    return read_document(text);
}

}  // namespace fcm::io
