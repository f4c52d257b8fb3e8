#pragma once

#include <string>

#include "chainlog/compression.hpp"

namespace chainlog {

/// Deterministic Solidity fragment for a value dictionary: an event whose
/// payload is the code type, an internal pure encoding function implementing
/// the table, and an emit helper taking the uncompressed value.
std::string generate_fragment(const ValueDictionary& dict, const std::string& eventName);

/// Same for a bit mapping: the event carries one packed word, the encoding
/// function range-checks raw fields and shift-ors them into place. Fields
/// marked `via` take the dictionary's source type and go through the
/// dictionary encoder emitted alongside (hence the lookup).
std::string generate_fragment(const BitMapping& mapping, const std::string& eventName,
                              const DictionaryLookup& dictionaries);

/// Helper naming scheme shared by both fragments: encodePhase, logPhase...
std::string fragment_function_name(const std::string& prefix, const std::string& specName);

} // namespace chainlog
