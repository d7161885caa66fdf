#pragma once

// Persistence and interchange:
//   * delimited adjacency matrix (comma separated, corner label ignored,
//     empty cell = no edge, "0" = zero-weight edge)
//   * structured JSON model documents (format_version 1.x)
//   * best-effort import of Mental Modeler XML (.mmp) files
//
// Every parser reports failures with a position: line/column for text
// grids and XML, a JSON pointer for documents.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fcm/inference.hpp"
#include "fcm/model.hpp"
#include "fcm/scenario.hpp"

namespace fcm::io {

inline constexpr std::string_view kFormatVersion = "1.0.0";

class ParseError : public std::runtime_error {
public:
    enum class Kind {
        Empty,
        RaggedRow,
        HeaderMismatch,
        MalformedNumber,
        WeightOutOfRange,
        InvalidConcept,
    };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& detail);

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }      // 1-based
    std::size_t column() const noexcept { return column_; }  // 1-based cell index, 0 = whole line

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

std::string_view to_string(ParseError::Kind kind);

class SchemaError : public std::runtime_error {
public:
    enum class Kind { SchemaViolation, UnsupportedVersion };

    SchemaError(Kind kind, std::string path, const std::string& reason);

    Kind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }  // JSON pointer, "" = root

private:
    Kind kind_;
    std::string path_;
};

class ImportError : public std::runtime_error {
public:
    enum class Kind { XmlMalformed, NoConceptsFound, ImportValidationFailed };

    ImportError(Kind kind, const std::string& what, std::vector<Violation> violations = {});

    Kind kind() const noexcept { return kind_; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    Kind kind_;
    std::vector<Violation> violations_;
};

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelDocument {
    std::string format_version{kFormatVersion};
    FcmModel model;
    std::vector<ScenarioSpec> scenarios;
    std::optional<InferenceConfig> config;
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();  // unknown top-level fields, kept verbatim

    friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

/// Weight text: shortest round-trip decimal, never scientific notation.
std::string format_weight(double w);

FcmModel parse_matrix_delimited(std::string_view text, std::string model_name = {});
std::string write_matrix_delimited(const FcmModel& model);

ModelDocument read_document(std::string_view text);
std::string write_document(const ModelDocument& doc);

struct XmlImport {
    ModelDocument document;
    std::vector<std::string> warnings;
};

XmlImport import_mentalmodeler_xml(std::string_view text);

enum class FileFormat { Delimited, Structured, VendorXml };
std::optional<FileFormat> parse_file_format(std::string_view text);
FileFormat format_from_extension(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Loads any supported format into a document (delimited files get no scenarios).
ModelDocument load_document(const std::filesystem::path& path,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace fcm::io
