#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <chainlog/codegen.hpp>
#include <chainlog/errors.hpp>
#include <chainlog/extractor.hpp>
#include <chainlog/parser.hpp>
#include <chainlog/render.hpp>
#include <chainlog/rpc.hpp>
#include <chainlog/validator.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw chainlog::Error("cannot open manifest " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// diagnostics go to stderr; requested data goes to stdout
chainlog::ast::Manifest parse_or_exit(const std::string& path) {
    auto result = chainlog::ast::parse_manifest(read_file(path));
    if (!result.ok()) {
        for (const auto& error : result.errors)
            std::cerr << path << ": " << error.render() << "\n";
        std::exit(kExitFailure);
    }
    return std::move(*result.manifest);
}

std::shared_ptr<chainlog::rpc::Transport> make_transport(const std::string& nodeUrl,
                                                         const std::string& fixturePath) {
    if (!fixturePath.empty())
        return chainlog::rpc::FixtureTransport::from_file(fixturePath);
    return std::make_shared<chainlog::rpc::HttpTransport>(nodeUrl);
}

struct CommonNodeArgs {
    std::string nodeUrl;
    std::string fixturePath;

    void attach(CLI::App* cmd, bool required) {
        auto* node = cmd->add_option("--node", nodeUrl,
                                     "JSON-RPC endpoint URL (or CHAINLOG_NODE env var)")
                         ->envname("CHAINLOG_NODE");
        auto* fixture =
            cmd->add_option("--fixture", fixturePath, "fixture file replacing the live node");
        node->excludes(fixture);
        if (required)
            fixture->excludes(node); // exactly one; presence checked later
    }

    bool has_endpoint() const { return !nodeUrl.empty() || !fixturePath.empty(); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"manifest-driven extraction of Ethereum data into logs, CSV and XES"};
    app.require_subcommand(1);

    std::string manifestPath;
    bool jsonOutput = false;

    // validate
    auto* validateCmd = app.add_subcommand("validate", "check a manifest for errors");
    validateCmd->add_option("manifest", manifestPath, "manifest file")->required();
    validateCmd->add_flag("--json", jsonOutput, "machine-readable report");
    CommonNodeArgs validateNode;
    validateNode.attach(validateCmd, false);

    // extract
    auto* extractCmd = app.add_subcommand("extract", "run the extraction pipeline");
    extractCmd->add_option("manifest", manifestPath, "manifest file")->required();
    CommonNodeArgs extractNode;
    extractNode.attach(extractCmd, true);
    std::string outDir = ".";
    extractCmd->add_option("--out", outDir, "output directory");
    bool streamFlag = false;
    extractCmd->add_flag("--stream", streamFlag, "per-block streaming export");
    double pollSeconds = 2.0;
    extractCmd->add_option("--poll-interval", pollSeconds, "streaming poll interval in seconds");
    std::uint64_t maxPolls = 0;
    extractCmd->add_option("--max-polls", maxPolls,
                           "stop streaming after this many polls (0 = run until killed)");
    std::uint64_t fromOverride = 0, toOverride = 0;
    auto* fromOpt = extractCmd->add_option("--from", fromOverride, "override the lower block bound");
    auto* toOpt = extractCmd->add_option("--to", toOverride, "override the upper block bound");
    extractCmd->add_flag("--json", jsonOutput, "machine-readable summary");

    // generate
    auto* generateCmd = app.add_subcommand("generate", "emit contract logging fragments");
    generateCmd->add_option("manifest", manifestPath, "manifest file")->required();
    std::string fragmentDir = ".";
    generateCmd->add_option("--out", fragmentDir, "fragment output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return kExitOk;
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validateCmd->parsed()) {
            auto manifest = parse_or_exit(manifestPath);
            std::optional<std::uint64_t> head;
            if (validateNode.has_endpoint()) {
                chainlog::rpc::NodeClient client(
                    make_transport(validateNode.nodeUrl, validateNode.fixturePath));
                head = client.latest_block_number();
            }
            auto report = chainlog::validate(manifest, head);
            std::cout << (jsonOutput ? report.render_json() : report.render());
            return report.ok() ? kExitOk : kExitFailure;
        }

        if (extractCmd->parsed()) {
            if (!extractNode.has_endpoint()) {
                std::cerr << "extract needs --node or --fixture (or CHAINLOG_NODE)\n";
                return kExitUsage;
            }
            auto manifest = parse_or_exit(manifestPath);
            auto report = chainlog::validate(manifest);
            if (!report.ok()) {
                std::cerr << report.render();
                return kExitFailure;
            }
            std::cerr << report.render(); // warnings only at this point

            chainlog::ExtractionOptions options;
            if (streamFlag)
                options.mode = chainlog::ExtractionOptions::Mode::Stream;
            if (*fromOpt)
                options.fromOverride = fromOverride;
            if (*toOpt)
                options.toOverride = toOverride;
            options.pollInterval =
                std::chrono::milliseconds(static_cast<std::int64_t>(pollSeconds * 1000));
            options.maxPolls = maxPolls;

            chainlog::rpc::NodeClient client(
                make_transport(extractNode.nodeUrl, extractNode.fixturePath));
            chainlog::SinkSet sinks(outDir, chainlog::selects_streaming(manifest, options));
            auto summary = chainlog::run(manifest, client, sinks, options);
            std::cout << (jsonOutput ? summary.render_json() : summary.render());
            return summary.aborted ? kExitFailure : kExitOk;
        }

        // generate
        auto manifest = parse_or_exit(manifestPath);
        auto report = chainlog::validate(manifest);
        if (!report.ok()) {
            std::cerr << report.render();
            return kExitFailure;
        }
        std::filesystem::create_directories(fragmentDir);
        std::map<std::string, chainlog::ValueDictionary> dictionaries;
        for (const auto* spec : manifest.dictionaries())
            dictionaries.emplace(spec->name, chainlog::ValueDictionary::from_ast(*spec));
        auto lookup = [&](const std::string& name) -> const chainlog::ValueDictionary* {
            auto it = dictionaries.find(name);
            return it == dictionaries.end() ? nullptr : &it->second;
        };
        auto write_fragment = [&](const std::string& name, const std::string& text) {
            auto path = std::filesystem::path(fragmentDir) / (name + ".sol.inc");
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw chainlog::Error("cannot write " + path.string());
            out << text;
            std::cerr << "wrote " << path.string() << "\n";
        };
        auto event_name = [](const std::string& specName) {
            return chainlog::fragment_function_name("", specName) + "Log";
        };
        for (const auto& [name, dict] : dictionaries)
            write_fragment(name, chainlog::generate_fragment(dict, event_name(name)));
        for (const auto* spec : manifest.bitmappings()) {
            auto mapping = chainlog::BitMapping::from_ast(*spec);
            write_fragment(spec->name,
                           chainlog::generate_fragment(mapping, event_name(spec->name), lookup));
        }
        return kExitOk;
    } catch (const chainlog::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
