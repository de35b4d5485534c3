#pragma once

#include <map>
#include <string>
#include <vector>

namespace epm {

/// Reproducibility record written alongside every output directory: the
/// subcommand, its full argument map, and the produced files. Re-running a
/// manifest must reproduce the outputs byte for byte, so no volatile data
/// (timestamps, hostnames) belongs here.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> args;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    bool operator==(const RunManifest&) const = default;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

} // namespace epm
