#pragma once

#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gkclim::toml {

// Subset of TOML used by experiment files: `[table]` headers (one level),
// `key = value` with floats, integers, booleans, basic strings and flat arrays
// of those, and `#` comments.

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<double, long long, bool, std::string, Array> data;

    bool is_number() const {
        return std::holds_alternative<double>(data) || std::holds_alternative<long long>(data);
    }
    double as_number() const;
    long long as_integer() const;
    bool as_bool() const;
    const std::string& as_string() const;
    const Array& as_array() const;
};

/// Keys of the root table live under "".
using Table = std::map<std::string, std::map<std::string, Value>>;

/// Throws ConfigError with a line number on malformed input.
Table parse(std::istream& in);
Table parse_file(const std::string& path);

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

}  // namespace gkclim::toml
