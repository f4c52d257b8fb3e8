#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainlog/ast.hpp"
#include "chainlog/operators.hpp"
#include "chainlog/rpc.hpp"
#include "chainlog/sinks.hpp"

namespace chainlog {

struct ExtractionOptions {
    enum class Mode { Auto, Batch, Stream }; // Auto: stream iff a root says CONTINUOUS
    Mode mode = Mode::Auto;
    std::optional<std::uint64_t> fromOverride;
    std::optional<std::uint64_t> toOverride;
    std::chrono::milliseconds pollInterval{2000};
    std::uint64_t maxPolls = 0; // stream mode: stop after this many polls (0 = run until killed)
    const OperatorRegistry* registry = &OperatorRegistry::builtins();
};

struct RuntimeIncident {
    std::uint64_t block = 0;
    std::optional<std::uint64_t> txIndex;
    std::optional<std::uint64_t> logIndex;
    std::string category; // type | scope | arithmetic | data
    std::string message;
};

struct ExtractionSummary {
    std::uint64_t blocksProcessed = 0;
    std::uint64_t transactionsMatched = 0;
    std::uint64_t logEntriesMatched = 0;
    std::map<std::string, std::uint64_t> emissionsPerSink;
    std::vector<RuntimeIncident> errorsEncountered;
    bool aborted = false;
    std::string abortReason;

    std::string render() const;
    std::string render_json() const;
};

/// Runs a validated manifest against a node. Blocks are consumed strictly in
/// ascending order; body statements run in source order per admitted entity;
/// entity-level evaluation errors are recorded and quarantine only that
/// entity's remaining body. Throws RangeUnresolvable when the resolved batch
/// range is empty and Error when the manifest does not validate.
ExtractionSummary run(const ast::Manifest& m, rpc::NodeClient& client, SinkSet& sinks,
                      const ExtractionOptions& options = {});

/// True when the manifest selects streaming (some root has CONTINUOUS as its
/// upper bound), used to construct the SinkSet consistently with run().
bool selects_streaming(const ast::Manifest& m, const ExtractionOptions& options);

/// First-use column order per CSV table (canonical header order).
std::map<std::string, std::vector<std::string>> csv_table_columns(const ast::Manifest& m);

/// Output names and kinds: declared OUTPUT statements plus every emit
/// target.
std::map<std::string, ast::OutputKind> collect_outputs(const ast::Manifest& m);

} // namespace chainlog
