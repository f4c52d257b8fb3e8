#include "chainlog/sinks.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "chainlog/errors.hpp"

namespace chainlog {

namespace {

const char* extension(ast::OutputKind kind) {
    switch (kind) {
    case ast::OutputKind::Log: return "log";
    case ast::OutputKind::Csv: return "csv";
    case ast::OutputKind::Xes: return "xes";
    }
    return "out";
}

} // namespace

std::string iso8601_utc(std::uint64_t secondsSinceEpoch) {
    std::time_t t = static_cast<std::time_t>(secondsSinceEpoch);
    std::tm parts{};
    gmtime_r(&t, &parts);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.000Z", parts.tm_year + 1900,
                  parts.tm_mon + 1, parts.tm_mday, parts.tm_hour, parts.tm_min, parts.tm_sec);
    return buf;
}

std::string csv_escape(const std::string& cell) {
    bool needsQuotes = cell.find_first_of(",\"\r\n") != std::string::npos;
    if (!needsQuotes)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    return out + "\"";
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

SinkSet::SinkSet(std::filesystem::path outDir, bool streamMode)
    : outDir_(std::move(outDir)), stream_(streamMode) {
    std::filesystem::create_directories(outDir_);
}

void SinkSet::declare(const std::string& name, ast::OutputKind kind) {
    outputs_.emplace(name, kind);
    counts_.emplace(name, 0);
    switch (kind) {
    case ast::OutputKind::Log: logs_[name]; break;
    case ast::OutputKind::Csv: csv_[name]; break;
    case ast::OutputKind::Xes: xes_[name]; break;
    }
}

void SinkSet::declare_csv_columns(const std::string& table, std::vector<std::string> columns) {
    csv_[table].columns = std::move(columns);
}

void SinkSet::emit_log_line(const std::string& output, const Provenance& where,
                            const std::string& text) {
    auto field = [](const std::optional<std::uint64_t>& v) {
        return v ? std::to_string(*v) : std::string("-");
    };
    logs_[output].lines.push_back(std::to_string(where.block) + ":" + field(where.txIndex) + ":" +
                                  field(where.logIndex) + "\t" + text);
    ++counts_[output];
}

void SinkSet::emit_csv_row(const std::string& table, const std::map<std::string, std::string>& cells) {
    CsvTable& t = csv_[table];
    std::vector<std::string> row;
    row.reserve(t.columns.size());
    for (const auto& column : t.columns) {
        auto it = cells.find(column);
        row.push_back(it == cells.end() ? "" : it->second);
    }
    t.rows.push_back(std::move(row));
    ++counts_[table];
}

SinkSet::XesTrace& SinkSet::trace_for(XesLog& log, const Value& traceId) {
    std::string id = traceId.render();
    auto it = log.traces.find(id);
    if (it == log.traces.end()) {
        log.traceOrder.push_back(id);
        XesTrace trace;
        trace.conceptName = id;
        it = log.traces.emplace(id, std::move(trace)).first;
    }
    return it->second;
}

void SinkSet::emit_xes_event(const std::string& output, const Value& traceId,
                             const std::vector<XesAttribute>& attrs) {
    XesTrace& trace = trace_for(xes_[output], traceId);
    trace.events.push_back(XesEvent{attrs});
    ++counts_[output];
}

void SinkSet::emit_xes_trace_attrs(const std::string& output, const Value& traceId,
                                   const std::vector<XesAttribute>& attrs) {
    XesTrace& trace = trace_for(xes_[output], traceId);
    for (const auto& attr : attrs) {
        bool replaced = false;
        for (auto& existing : trace.attrs) {
            if (existing.key == attr.key) {
                existing = attr;
                replaced = true;
                break;
            }
        }
        if (!replaced)
            trace.attrs.push_back(attr);
        if (attr.key == "concept:name")
            trace.conceptName.clear(); // explicit attribute wins over the default
    }
    ++counts_[output];
}

std::string SinkSet::render_csv(const CsvTable& table) const {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ",";
        out += csv_escape(table.columns[i]);
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ",";
            out += csv_escape(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

std::string SinkSet::render_xes(const XesLog& log) const {
    bool usesConcept = !log.traceOrder.empty();
    bool usesTime = false;
    auto scan = [&](const std::vector<XesAttribute>& attrs) {
        for (const auto& attr : attrs) {
            if (attr.key.rfind("time:", 0) == 0)
                usesTime = true;
            if (attr.key.rfind("concept:", 0) == 0)
                usesConcept = true;
        }
    };
    for (const auto& [id, trace] : log.traces) {
        scan(trace.attrs);
        for (const auto& event : trace.events)
            scan(event.attrs);
    }

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<log xes.version=\"1.0\" xes.features=\"\" xmlns=\"http://www.xes-standard.org/\">\n";
    if (usesConcept)
        out += "  <extension name=\"Concept\" prefix=\"concept\" "
               "uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    if (usesTime)
        out += "  <extension name=\"Time\" prefix=\"time\" "
               "uri=\"http://www.xes-standard.org/time.xesext\"/>\n";

    auto attribute = [](const XesAttribute& attr, int indent) {
        return std::string(static_cast<std::size_t>(indent), ' ') + "<" + attr.xesType + " key=\"" +
               xml_escape(attr.key) + "\" value=\"" + xml_escape(attr.value) + "\"/>\n";
    };

    for (const auto& id : log.traceOrder) {
        const XesTrace& trace = log.traces.at(id);
        out += "  <trace>\n";
        if (!trace.conceptName.empty())
            out += attribute(XesAttribute{"concept:name", "string", trace.conceptName}, 4);
        for (const auto& attr : trace.attrs)
            out += attribute(attr, 4);
        for (const auto& event : trace.events) {
            out += "    <event>\n";
            for (const auto& attr : event.attrs)
                out += attribute(attr, 6);
            out += "    </event>\n";
        }
        out += "  </trace>\n";
    }
    out += "</log>\n";
    return out;
}

std::string SinkSet::file_name(const std::string& output, const char* ext,
                               std::optional<std::uint64_t> block) const {
    if (block)
        return output + "_" + std::to_string(*block) + "." + ext;
    return output + "." + ext;
}

void SinkSet::write_file(const std::string& fileName, const std::string& content) const {
    std::filesystem::path target = outDir_ / fileName;
    std::filesystem::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw SinkError("cannot open " + temp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw SinkError("short write to " + temp.string());
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec)
        throw SinkError("cannot move " + temp.string() + " into place: " + ec.message());
}

void SinkSet::flush_all(std::optional<std::uint64_t> block) {
    for (const auto& [name, kind] : outputs_) {
        switch (kind) {
        case ast::OutputKind::Log: {
            std::string content;
            for (const auto& line : logs_[name].lines)
                content += line + "\n";
            write_file(file_name(name, "log", block), content);
            break;
        }
        case ast::OutputKind::Csv:
            write_file(file_name(name, "csv", block), render_csv(csv_[name]));
            break;
        case ast::OutputKind::Xes:
            write_file(file_name(name, "xes", block), render_xes(xes_[name]));
            break;
        }
    }
}

void SinkSet::flush_block(std::uint64_t blockNumber) {
    if (!stream_)
        return;
    flush_all(blockNumber);
    for (auto& [name, log] : logs_)
        log.lines.clear();
    for (auto& [name, table] : csv_)
        table.rows.clear();
    for (auto& [name, log] : xes_) {
        log.traceOrder.clear();
        log.traces.clear();
    }
}

void SinkSet::flush_batch() {
    if (stream_)
        return;
    flush_all(std::nullopt);
}

} // namespace chainlog
