#pragma once

#include "bathlab/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bathlab {

// Plain-text configuration: one `key = value` per line, `#` starts a comment,
// blank lines ignored, keys are [a-z0-9_]+. Every command has a fixed key set
// with defaults; unknown or repeated keys are configuration errors.
class RunConfig {
public:
    RunConfig() = default;
    static RunConfig parse(std::string_view text, const std::string& command);
    static RunConfig load(const std::filesystem::path& path, const std::string& command);
    static RunConfig defaults(const std::string& command) { return parse("", command); }

    const std::string& command() const { return command_; }
    void set(const std::string& key, const std::string& value); // must be a known key

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    // "a,b,c; d,e,f"
    std::vector<Mode> get_modes(const std::string& key) const;
    Mode get_mode(const std::string& key) const;

    // fully resolved configuration, one `key = value` per line in key order
    std::string resolved_text() const;

private:
    std::string command_;
    std::map<std::string, std::string> values_;
};

// Keys and defaults of one command, in order.
const std::vector<std::pair<std::string, std::string>>& command_defaults(const std::string& command);

} // namespace bathlab
