#pragma once

#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "snnmoo/errors.hpp"

namespace snnmoo::io {

/// Parsed document plus the line each key was defined on, keyed by dotted path.
struct TomlDocument {
    nlohmann::json root = nlohmann::json::object();
    std::map<std::string, int> lines;

    int line_of(const std::string& path) const {
        const auto it = lines.find(path);
        return it == lines.end() ? 0 : it->second;
    }
};

/// Reader for the TOML subset used by experiment files: comments, [tables]
/// (dotted names allowed), bare keys, strings, integers, floats, booleans
/// and (nested, multi-line) arrays. Arrays of tables and inline tables are
/// rejected.
class TomlReader {
public:
    TomlReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    TomlDocument parse() {
        TomlDocument doc;
        std::vector<std::string> table;
        while (true) {
            skip_blank_lines();
            if (at_end()) {
                break;
            }
            if (peek() == '[') {
                if (peek(1) == '[') {
                    fail("arrays of tables are not supported");
                }
                advance();
                table = parse_dotted_key(']');
                expect(']');
                end_of_line();
                const auto path = join(table);
                if (doc.lines.count("[" + path + "]")) {
                    fail("table [" + path + "] defined twice");
                }
                doc.lines["[" + path + "]"] = line_;
                auto& node = descend(doc.root, table);
                (void)node;
                continue;
            }
            const int key_line = line_;
            auto key = parse_dotted_key('=');
            skip_spaces();
            expect('=');
            skip_spaces();
            auto value = parse_value();
            end_of_line();
            std::vector<std::string> full = table;
            full.insert(full.end(), key.begin(), key.end());
            const std::string leaf = full.back();
            full.pop_back();
            auto& parent = descend(doc.root, full);
            if (parent.contains(leaf)) {
                line_ = key_line;
                fail("duplicate key '" + join(table) + (table.empty() ? "" : ".") + join(key) + "'");
            }
            parent[leaf] = std::move(value);
            full.push_back(leaf);
            doc.lines[join(full)] = key_line;
        }
        return doc;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + what);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }
    char advance() {
        const char ch = text_[pos_++];
        if (ch == '\n') {
            ++line_;
        }
        return ch;
    }
    void expect(char ch) {
        if (peek() != ch) {
            fail(std::string("expected '") + ch + "'");
        }
        advance();
    }
    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) {
            advance();
        }
    }
    void skip_comment() {
        if (peek() == '#') {
            while (!at_end() && peek() != '\n') {
                advance();
            }
        }
    }
    void skip_blank_lines() {
        while (!at_end()) {
            skip_spaces();
            skip_comment();
            if (peek() == '\r') {
                advance();
            }
            if (peek() == '\n') {
                advance();
                continue;
            }
            break;
        }
    }
    void end_of_line() {
        skip_spaces();
        skip_comment();
        if (peek() == '\r') {
            advance();
        }
        if (!at_end() && peek() != '\n') {
            fail("unexpected text after value");
        }
    }
    // Whitespace, comments and newlines inside arrays.
    void skip_array_space() {
        while (!at_end()) {
            const char ch = peek();
            if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
                advance();
            } else if (ch == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    static std::string join(const std::vector<std::string>& parts) {
        std::string s;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            s += (k ? "." : "") + parts[k];
        }
        return s;
    }

    static bool bare_char(char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
    }

    std::vector<std::string> parse_dotted_key(char terminator) {
        std::vector<std::string> parts;
        while (true) {
            skip_spaces();
            std::string part;
            if (peek() == '"') {
                part = parse_basic_string();
            } else {
                while (!at_end() && bare_char(peek())) {
                    part += advance();
                }
            }
            if (part.empty()) {
                fail("expected a key");
            }
            parts.push_back(part);
            skip_spaces();
            if (peek() == '.') {
                advance();
                continue;
            }
            if (peek() != terminator) {
                fail(std::string("expected '") + terminator + "' after key");
            }
            return parts;
        }
    }

    nlohmann::json& descend(nlohmann::json& root, const std::vector<std::string>& path) {
        nlohmann::json* node = &root;
        for (const auto& p : path) {
            auto& child = (*node)[p];
            if (child.is_null()) {
                child = nlohmann::json::object();
            }
            if (!child.is_object()) {
                fail("'" + p + "' is not a table");
            }
            node = &child;
        }
        return *node;
    }

    std::string parse_basic_string() {
        expect('"');
        std::string out;
        while (true) {
            if (at_end() || peek() == '\n') {
                fail("unterminated string");
            }
            char ch = advance();
            if (ch == '"') {
                return out;
            }
            if (ch == '\\') {
                const char esc = advance();
                switch (esc) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(std::string("unsupported escape \\") + esc);
                }
                continue;
            }
            out += ch;
        }
    }

    std::string parse_literal_string() {
        expect('\'');
        std::string out;
        while (true) {
            if (at_end() || peek() == '\n') {
                fail("unterminated string");
            }
            const char ch = advance();
            if (ch == '\'') {
                return out;
            }
            out += ch;
        }
    }

    nlohmann::json parse_value() {
        const char ch = peek();
        if (ch == '"') {
            return parse_basic_string();
        }
        if (ch == '\'') {
            return parse_literal_string();
        }
        if (ch == '[') {
            advance();
            nlohmann::json arr = nlohmann::json::array();
            while (true) {
                skip_array_space();
                if (peek() == ']') {
                    advance();
                    return arr;
                }
                arr.push_back(parse_value());
                skip_array_space();
                if (peek() == ',') {
                    advance();
                    continue;
                }
                if (peek() == ']') {
                    advance();
                    return arr;
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (ch == '{') {
            fail("inline tables are not supported");
        }
        std::string token;
        while (!at_end()) {
            const char c = peek();
            if (c == ',' || c == ']' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') {
                break;
            }
            token += advance();
        }
        if (token == "true") {
            return true;
        }
        if (token == "false") {
            return false;
        }
        return parse_number(token);
    }

    nlohmann::json parse_number(std::string token) {
        if (token.empty()) {
            fail("expected a value");
        }
        std::string cleaned;
        for (char c : token) {
            if (c != '_') {
                cleaned += c;
            }
        }
        std::string_view body = cleaned;
        const bool negative = !body.empty() && body.front() == '-';
        if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
            body.remove_prefix(1);
        }
        if (body == "inf" || body == "nan") {
            const double v = body == "inf" ? std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::quiet_NaN();
            return negative ? -v : v;
        }
        const bool is_float = cleaned.find_first_of(".eE") != std::string::npos;
        try {
            std::size_t used = 0;
            if (is_float) {
                const double v = std::stod(cleaned, &used);
                if (used == cleaned.size()) {
                    return v;
                }
            } else {
                const long long v = std::stoll(cleaned, &used);
                if (used == cleaned.size()) {
                    return v;
                }
            }
        } catch (const std::exception&) {
        }
        fail("invalid value '" + token + "'");
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

inline TomlDocument parse_toml(std::string_view text, const std::string& source = "<config>") {
    return TomlReader(text, source).parse();
}

}  // namespace snnmoo::io
