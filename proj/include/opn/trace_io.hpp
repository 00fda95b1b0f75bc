#pragma once

#include <string>
#include <string_view>

#include "opn/engine.hpp"
#include "opn/net.hpp"

namespace opn {

/// Serialized form of a run: the trace plus the enabling mode it was
/// produced under and whether the final marking is quiescent.
struct TraceDocument {
    Trace trace;
    ContainmentMode mode = ContainmentMode::Subset;
    bool deadlock = false;

    friend bool operator==(const TraceDocument&, const TraceDocument&) = default;
};

/// JSON text of the form
/// `{net, mode, initial: {place: expr}, events: [{step, transition, env: {name: number},
///  marking: {place: expr}}], final, deadlock}`. Empty places are omitted.
std::string write_trace_json(const TraceDocument& doc, int indent = 2);

/// Inverse of write_trace_json. Token expressions are resolved against the
/// colors of `net`. Throws opn::Error on malformed documents, including a
/// `final` field that disagrees with the last event.
TraceDocument read_trace_json(std::string_view text, const Net& net);

}  // namespace opn
