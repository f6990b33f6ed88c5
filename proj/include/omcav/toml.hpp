// toml.hpp — Minimal TOML reader covering the configuration schema: top-level
// tables, scalar keys (string / number / bool), and possibly nested arrays.

#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "omcav/errors.hpp"

namespace omcav::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<std::string, double, bool, Array> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }

    const std::string& as_string() const { return std::get<std::string>(data); }
    double as_number() const { return std::get<double>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const Array& as_array() const { return std::get<Array>(data); }
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

namespace detail {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!done() && (peek() == ' ' || peek() == '\t')) take();
    }
    void skip_ws_and_comments() {
        for (;;) {
            skip_ws_inline();
            if (!done() && peek() == '#') {
                while (!done() && peek() != '\n') take();
            } else if (!done() && (peek() == '\n' || peek() == '\r')) {
                take();
            } else {
                return;
            }
        }
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw config_error("config parse error at line " + std::to_string(line) + ": " + what);
    }
};

inline std::string parse_bare_key(Cursor& c) {
    std::string k;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
                         c.peek() == '-'))
        k += c.take();
    if (k.empty()) c.fail("expected a key");
    return k;
}

inline std::string parse_string(Cursor& c) {
    c.take();  // opening quote
    std::string s;
    while (!c.done() && c.peek() != '"') {
        char ch = c.take();
        if (ch == '\\' && !c.done()) {
            const char esc = c.take();
            switch (esc) {
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        }
        s += ch;
    }
    if (c.done()) c.fail("unterminated string");
    c.take();  // closing quote
    return s;
}

inline Value parse_value(Cursor& c);

inline Value parse_array(Cursor& c) {
    c.take();  // '['
    Array arr;
    for (;;) {
        c.skip_ws_and_comments();
        if (c.done()) c.fail("unterminated array");
        if (c.peek() == ']') {
            c.take();
            return Value{arr};
        }
        arr.push_back(parse_value(c));
        c.skip_ws_and_comments();
        if (!c.done() && c.peek() == ',') {
            c.take();
        } else if (!c.done() && c.peek() == ']') {
            c.take();
            return Value{arr};
        } else {
            c.fail("expected ',' or ']' in array");
        }
    }
}

inline Value parse_value(Cursor& c) {
    c.skip_ws_inline();
    if (c.done()) c.fail("expected a value");
    const char ch = c.peek();
    if (ch == '"') return Value{parse_string(c)};
    if (ch == '[') return parse_array(c);
    std::string tok;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' &&
           c.peek() != '\n' && c.peek() != '\r')
        tok += c.take();
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.pop_back();
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return Value{v};
    } catch (const std::exception&) {
        c.fail("cannot parse value '" + tok + "'");
    }
}

} // namespace detail

inline Document parse(const std::string& text) {
    detail::Cursor c{text};
    Document doc;
    std::string current = "";
    for (;;) {
        c.skip_ws_and_comments();
        if (c.done()) return doc;
        if (c.peek() == '[') {
            c.take();
            c.skip_ws_inline();
            current = detail::parse_bare_key(c);
            c.skip_ws_inline();
            if (c.done() || c.peek() != ']') c.fail("expected ']' after table name");
            c.take();
        } else {
            const std::string key = detail::parse_bare_key(c);
            c.skip_ws_inline();
            if (c.done() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
            c.take();
            doc[current][key] = detail::parse_value(c);
        }
        c.skip_ws_inline();
        if (!c.done() && c.peek() == '#')
            while (!c.done() && c.peek() != '\n') c.take();
        if (!c.done() && c.peek() != '\n' && c.peek() != '\r') c.fail("trailing characters");
    }
}

} // namespace omcav::toml
