#pragma once

#include <json.hpp>

#include "field.hpp"

namespace ciw {

using ordered_json = nlohmann::ordered_json;

// One diagnostic record; CSV keeps the headline columns, JSON keeps the
// (module, operation, time-sample) trace for every number.
struct ReportRecord {
    int q = 0;
    std::string quantity;
    double value = 0.0;
    double tolerance = 0.0;  // 0 -> informational
    bool has_tolerance = false;
    bool pass = true;
    std::string module;
    std::string op;
    int sample = -1;  // -1: aggregated over samples
};

// RFC 4180 CSV with CRLF line endings, written atomically
// (temp file + rename). Columns: q, quantity, value, tolerance, status.
void write_csv(const std::string& path, const std::vector<ReportRecord>& records);

// Single top-level JSON object with schema_version, written atomically.
void write_json(const std::string& path, const ordered_json& doc);

ordered_json records_to_json(const std::vector<ReportRecord>& records);

// Raw field dump: little-endian, 64-byte self-describing header (magic
// "CIWF"), then half-spectrum coefficients in row-major frequency order.
void dump_field(const std::string& path, const ScalarTimeField& f, std::uint32_t kind);
void dump_field(const std::string& path, const VectorTimeField& f, std::uint32_t kind);
void dump_field(const std::string& path, const SymTensorTimeField& f, std::uint32_t kind);

struct DumpInfo {
    std::uint32_t version = 0, d = 0, n = 0, nt = 0, components = 0, layout = 0, kind = 0;
    double T = 0.0;
    std::size_t coefficients = 0;
    double max_abs = 0.0;
};
DumpInfo read_dump(const std::string& path);

}  // namespace ciw
