#include "epm/xes.hpp"

#include "epm/errors.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <ostream>
#include <sstream>

namespace epm {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_string_attr(std::ostream& out, int indent, const std::string& key,
                       const std::string& value) {
    for (int i = 0; i < indent; ++i) out << "  ";
    out << "<string key=\"" << xml_escape(key) << "\" value=\"" << xml_escape(value) << "\"/>\n";
}

} // namespace

void write_xes(const EventLog& log, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n";
    out << "  <extension name=\"Concept\" prefix=\"concept\" "
           "uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    out << "  <extension name=\"Time\" prefix=\"time\" "
           "uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
    for (const auto& [key, value] : log.attributes) write_string_attr(out, 1, key, value);
    for (const auto& trace : log.traces) {
        out << "  <trace>\n";
        write_string_attr(out, 2, "concept:name", trace.case_id);
        for (const auto& e : trace.events) {
            out << "    <event>\n";
            write_string_attr(out, 3, "concept:name", activity_of(e));
            out << "      <date key=\"time:timestamp\" value=\"" << format_iso8601(e.timestamp)
                << "\"/>\n";
            write_string_attr(out, 3, "action", e.action);
            write_string_attr(out, 3, "info", e.info);
            if (e.code) write_string_attr(out, 3, "code", to_string(*e.code));
            out << "    </event>\n";
        }
        out << "  </trace>\n";
    }
    out << "</log>\n";
}

std::string write_xes(const EventLog& log) {
    std::ostringstream out;
    write_xes(log, out);
    return out.str();
}

namespace {

using boost::property_tree::ptree;

// Collects the flat key/value attributes of an XES element.
std::map<std::string, std::string> element_attrs(const ptree& node) {
    std::map<std::string, std::string> attrs;
    for (const auto& [name, child] : node) {
        if (name != "string" && name != "date" && name != "int" && name != "float" &&
            name != "boolean" && name != "id")
            continue;
        auto key = child.get_optional<std::string>("<xmlattr>.key");
        auto value = child.get_optional<std::string>("<xmlattr>.value");
        if (key && value) attrs.emplace(*key, *value);
    }
    return attrs;
}

} // namespace

EventLog read_xes(std::istream& in) {
    ptree doc;
    try {
        boost::property_tree::read_xml(in, doc);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw ParseError("XES XML error at line " + std::to_string(e.line()) + ": " +
                         e.message());
    }

    auto log_node = doc.get_child_optional("log");
    if (!log_node) throw ParseError("XES document has no <log> element");

    EventLog log;
    std::size_t trace_index = 0;
    for (const auto& [name, node] : *log_node) {
        if (name == "string") {
            auto key = node.get_optional<std::string>("<xmlattr>.key");
            auto value = node.get_optional<std::string>("<xmlattr>.value");
            if (key && value) log.attributes[*key] = *value;
            continue;
        }
        if (name != "trace") continue;
        ++trace_index;

        Trace trace;
        const auto trace_attrs = element_attrs(node);
        if (auto it = trace_attrs.find("concept:name"); it != trace_attrs.end()) {
            trace.case_id = it->second;
        } else {
            throw ParseError("trace #" + std::to_string(trace_index) +
                             " is missing concept:name");
        }

        for (const auto& [child_name, child] : node) {
            if (child_name != "event") continue;
            const auto attrs = element_attrs(child);
            Event e;
            e.case_id = trace.case_id;
            if (auto it = attrs.find("action"); it != attrs.end()) {
                e.action = it->second;
            } else if (auto it2 = attrs.find("concept:name"); it2 != attrs.end()) {
                e.action = it2->second;
            } else {
                throw ParseError("trace \"" + trace.case_id +
                                 "\": event missing concept:name");
            }
            if (auto it = attrs.find("time:timestamp"); it != attrs.end())
                e.timestamp = parse_timestamp(it->second);
            if (auto it = attrs.find("info"); it != attrs.end()) e.info = it->second;
            if (auto it = attrs.find("code"); it != attrs.end()) {
                auto label = srl_label_from_string(it->second);
                if (!label)
                    throw ParseError("trace \"" + trace.case_id + "\": unknown code \"" +
                                     it->second + "\"");
                e.code = *label;
            }
            trace.events.push_back(std::move(e));
        }
        log.traces.push_back(std::move(trace));
    }

    sort_and_validate(log);
    return log;
}

EventLog read_xes(const std::string& text) {
    std::istringstream in(text);
    return read_xes(in);
}

} // namespace epm
