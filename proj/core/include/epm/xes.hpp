#pragma once

#include "epm/event_log.hpp"

#include <iosfwd>
#include <string>

namespace epm {

/// Serializes a log as IEEE XES 1.0 XML (concept and time extensions only,
/// the subset ProM needs). Output is deterministic: identical logs produce
/// byte-identical text. Every event carries concept:name (its event-class
/// name), time:timestamp (ISO-8601 UTC) and string attributes for
/// action/info and, when assigned, code.
std::string write_xes(const EventLog& log);
void write_xes(const EventLog& log, std::ostream& out);

/// Inverse of write_xes on the retained attribute set. Also accepts foreign
/// XES: events lacking the explicit action attribute fall back to
/// concept:name. Throws ParseError with a location for XML syntax errors and
/// for events missing both concept:name and action (the message names the
/// enclosing trace).
EventLog read_xes(std::istream& in);
EventLog read_xes(const std::string& text);

} // namespace epm
