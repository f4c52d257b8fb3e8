#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlog/ast.hpp"
#include "chainlog/value.hpp"

namespace chainlog {

struct Provenance {
    std::uint64_t block = 0;
    std::optional<std::uint64_t> txIndex;
    std::optional<std::uint64_t> logIndex;
};

struct XesAttribute {
    std::string key;
    std::string xesType; // string | date | int | float | boolean | id
    std::string value;   // rendered
};

/// All output targets of a run. In batch mode everything is buffered and
/// flush_batch() writes one `<name>.<ext>` per output; in streaming mode
/// flush_block(n) writes `<name>_<n>.<ext>` holding only that block's data
/// (rewriting any existing file, which is how reorg overwrites happen) and
/// clears the buffers. Files are written atomically via a temp file.
class SinkSet {
public:
    SinkSet(std::filesystem::path outDir, bool streamMode);

    void declare(const std::string& name, ast::OutputKind kind);
    /// Pins a CSV table's header so even empty per-block files carry it.
    void declare_csv_columns(const std::string& table, std::vector<std::string> columns);

    void emit_log_line(const std::string& output, const Provenance& where, const std::string& text);
    void emit_csv_row(const std::string& table, const std::map<std::string, std::string>& cells);
    void emit_xes_event(const std::string& output, const Value& traceId,
                        const std::vector<XesAttribute>& attrs);
    void emit_xes_trace_attrs(const std::string& output, const Value& traceId,
                              const std::vector<XesAttribute>& attrs);

    void flush_block(std::uint64_t blockNumber);
    void flush_batch();

    const std::map<std::string, std::uint64_t>& emission_counts() const { return counts_; }
    bool stream_mode() const { return stream_; }

private:
    struct CsvTable {
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;
    };
    struct XesEvent {
        std::vector<XesAttribute> attrs;
    };
    struct XesTrace {
        std::string conceptName;
        std::vector<XesAttribute> attrs; // trace-level, ordered, unique keys
        std::vector<XesEvent> events;
    };
    struct XesLog {
        std::vector<std::string> traceOrder; // rendered trace ids, insertion order
        std::map<std::string, XesTrace> traces;
    };
    struct LogFile {
        std::vector<std::string> lines;
    };

    std::string render_csv(const CsvTable& table) const;
    std::string render_xes(const XesLog& log) const;
    void write_file(const std::string& fileName, const std::string& content) const;
    std::string file_name(const std::string& output, const char* ext,
                          std::optional<std::uint64_t> block) const;
    void flush_all(std::optional<std::uint64_t> block);
    XesTrace& trace_for(XesLog& log, const Value& traceId);

    std::filesystem::path outDir_;
    bool stream_;
    std::map<std::string, ast::OutputKind> outputs_;
    std::map<std::string, CsvTable> csv_;
    std::map<std::string, XesLog> xes_;
    std::map<std::string, LogFile> logs_;
    std::map<std::string, std::uint64_t> counts_;
};

/// ISO-8601 UTC with millisecond precision, e.g. 2020-01-31T23:59:07.000Z.
std::string iso8601_utc(std::uint64_t secondsSinceEpoch);

/// RFC 4180 cell quoting: wraps and doubles quotes when the cell contains a
/// comma, quote or line break.
std::string csv_escape(const std::string& cell);

std::string xml_escape(const std::string& text);

} // namespace chainlog
