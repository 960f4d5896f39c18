#pragma once

// .nslog: one JSON object per line, {"kind":..,"payload":..,"seq":..} with
// seq counting up from 0, sorted keys, LF endings, no trailing whitespace.
// .clif: parenthesized prefix sentences, axioms first, then substrate
// sentences in append order, then one ";; layer: <name>" section per layer.

#include <string>
#include <string_view>

#include "nsub/layers.hpp"

namespace nsub {

/// The line (with its trailing '\n') for journal entry `index`.
std::string event_line(const LayeredStore& store, std::size_t index);

std::string export_log(const LayeredStore& store);

/// Replays the stream through the normal store operations, so every
/// invariant is re-checked. Throws ImportError (MalformedLine, SequenceGap,
/// ReplayViolation) naming the 1-based line.
LayeredStore import_log(std::string_view bytes, const SubstrateSchema& schema = default_schema());

std::string export_clif(const LayeredStore& store);
std::string export_clif(const SubstrateStore& store);

/// Drops every ";; layer:" section, leaving axioms and substrate sentences.
std::string clif_substrate_section(std::string_view clif);

/// Number of lines in the fixed axiom block for `schema`.
std::size_t clif_axiom_count(const SubstrateSchema& schema);

}  // namespace nsub
