#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mva/branch.hpp"
#include "mva/mvt.hpp"

namespace mva {

struct ColumnError {
    std::size_t column = 0;
    double b = 0.0;
    std::string message;

    friend bool operator==(const ColumnError&, const ColumnError&) = default;
};

/// Solution set of F(b, c) = 0 sampled column by column over a b-grid.
struct ScanResult {
    std::string expression;
    double a0 = 0.0;
    Interval domain{};
    double b_min = 0.0;
    double b_max = 0.0;
    std::size_t b_count = 0;
    int c_grid_n = kDefaultGrid;
    double tol = 1e-10;
    std::vector<SolutionPoint> points;  // sorted by (b, c)
    std::vector<std::size_t> column;    // column index of each point
    std::vector<ColumnError> column_errors;
};

/// Column j sits at b_min + (b_max - b_min) * j / (b_count - 1). Columns are
/// independent; `threads` = 0 uses the hardware concurrency. The result does
/// not depend on the thread count. DegenerateProblem in a column is recorded
/// in column_errors; other errors propagate.
ScanResult scan(const Problem& p, double b_min, double b_max, std::size_t b_count, int c_grid_n = kDefaultGrid,
                double tol = 1e-10, unsigned threads = 0);

enum class Format { Csv, Json, Svg };

Format format_from_string(std::string_view s);
std::string_view to_string(Format f);

/// Serializers. CSV rows are `b,c,residual,column` with a single trailing LF;
/// for a branch the last field is the point index.
std::string to_csv(const ScanResult& r);
std::string to_csv(const Branch& br);
std::string to_json(const ScanResult& r);
std::string to_json(const Branch& br);
std::string to_svg(const ScanResult& r);
std::string to_svg(const Branch& br);

std::string render(const ScanResult& r, Format f);
std::string render(const Branch& br, Format f);

/// Writes the rendering to `path`; Error{Io} when the file cannot be written.
void emit(const ScanResult& r, Format f, const std::filesystem::path& path);
void emit(const Branch& br, Format f, const std::filesystem::path& path);

struct CsvRow {
    SolutionPoint point;
    std::size_t column = 0;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

/// Parses the CSV written by to_csv. Error{Syntax} on a malformed document.
std::vector<CsvRow> parse_csv(std::string_view text);
std::string write_csv(const std::vector<CsvRow>& rows);

/// Groups scan points into families by linking each column to the previous
/// one (nearest linear extrapolation within a relative threshold). Each
/// family lists point indices in increasing b.
std::vector<std::vector<std::size_t>> link_families(const ScanResult& r);

}  // namespace mva
