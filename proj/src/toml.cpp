#include "gkclim/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gkclim/errors.hpp"

namespace gkclim::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

class ValueParser {
public:
    ValueParser(std::string_view text, int line) : s_(text), line_(line) {}

    Value parse_all() {
        Value v = parse_value();
        skip_ws();
        if (pos_ != s_.size()) fail(line_, "trailing characters after value");
        return v;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    Value parse_value() {
        skip_ws();
        if (pos_ >= s_.size()) fail(line_, "missing value");
        const char c = s_[pos_];
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return Value{true};
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return Value{false};
        }
        return parse_number();
    }

    Value parse_string() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\' && pos_ < s_.size()) {
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(line_, std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) fail(line_, "unterminated string");
        ++pos_;
        return Value{std::move(out)};
    }

    Value parse_array() {
        ++pos_;
        Array items;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return Value{std::move(items)};
        }
        while (true) {
            items.push_back(parse_value());
            skip_ws();
            if (pos_ >= s_.size()) fail(line_, "unterminated array");
            if (s_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            fail(line_, "expected ',' or ']' in array");
        }
        return Value{std::move(items)};
    }

    Value parse_number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
               !std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        std::string tok;
        for (char c : s_.substr(start, pos_ - start))
            if (c != '_') tok.push_back(c);
        if (tok == "inf" || tok == "+inf") return Value{HUGE_VAL};
        if (tok == "-inf") return Value{-HUGE_VAL};
        if (tok == "nan" || tok == "+nan" || tok == "-nan") return Value{std::nan("")};
        const bool is_float = tok.find_first_of(".eE") != std::string::npos;
        const char* first = tok.data() + (tok.size() > 0 && tok[0] == '+' ? 1 : 0);
        const char* last = tok.data() + tok.size();
        if (is_float) {
            double v = 0;
            auto [p, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || p != last) fail(line_, "invalid number '" + tok + "'");
            return Value{v};
        }
        long long v = 0;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || p != last) fail(line_, "invalid value '" + tok + "'");
        return Value{v};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return true;
}

}  // namespace

double Value::as_number() const {
    if (const auto* d = std::get_if<double>(&data)) return *d;
    if (const auto* i = std::get_if<long long>(&data)) return static_cast<double>(*i);
    throw ConfigError("expected a number");
}

long long Value::as_integer() const {
    if (const auto* i = std::get_if<long long>(&data)) return *i;
    if (const auto* d = std::get_if<double>(&data)) {
        if (std::floor(*d) == *d) return static_cast<long long>(*d);
    }
    throw ConfigError("expected an integer");
}

bool Value::as_bool() const {
    if (const auto* b = std::get_if<bool>(&data)) return *b;
    throw ConfigError("expected a boolean");
}

const std::string& Value::as_string() const {
    if (const auto* s = std::get_if<std::string>(&data)) return *s;
    throw ConfigError("expected a string");
}

const Array& Value::as_array() const {
    if (const auto* a = std::get_if<Array>(&data)) return *a;
    throw ConfigError("expected an array");
}

Table parse(std::istream& in) {
    Table table;
    table[""];
    std::string current;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) fail(line_no, "malformed table header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) fail(line_no, "invalid table name");
            current = std::string(name);
            if (table.count(current) && !table[current].empty())
                fail(line_no, "duplicate table [" + current + "]");
            table[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (!valid_key(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
        auto& section = table[current];
        if (section.count(std::string(key)))
            fail(line_no, "duplicate key '" + std::string(key) + "'");
        section.emplace(std::string(key), ValueParser(line.substr(eq + 1), line_no).parse_all());
    }
    return table;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    // Keep floats recognisable as floats when read back.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

}  // namespace gkclim::toml
