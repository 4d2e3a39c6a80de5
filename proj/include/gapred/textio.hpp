#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gapred/util.hpp"

namespace gapred {

/// Whitespace token stream with line tracking, shared by all file formats.
class token_reader {
public:
    explicit token_reader(const std::string& text) : text_(text) {}

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    std::string next(const char* what) {
        skip_ws();
        if (pos_ >= text_.size())
            throw parse_error(std::string("line ") + std::to_string(line_) +
                              ": unexpected end of input, expected " + what);
        size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    i64 next_int(const char* what) {
        std::string t = next(what);
        i64 v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size())
            throw parse_error(std::string("line ") + std::to_string(line_) + ": expected " + what +
                              ", got '" + t + "'");
        return v;
    }

    u64 next_u64(const char* what) {
        i64 v = next_int(what);
        if (v < 0)
            throw parse_error(std::string("line ") + std::to_string(line_) + ": expected nonnegative " +
                              what + ", got " + std::to_string(v));
        return static_cast<u64>(v);
    }

    double next_double(const char* what) {
        std::string t = next(what);
        try {
            size_t used = 0;
            double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw parse_error(std::string("line ") + std::to_string(line_) + ": expected " + what +
                              ", got '" + t + "'");
        }
    }

    void expect(const std::string& word) {
        std::string t = next(word.c_str());
        if (t != word)
            throw parse_error(std::string("line ") + std::to_string(line_) + ": expected '" + word +
                              "', got '" + t + "'");
    }

    // consumes the rest of the current line (comment handling)
    void skip_line() {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }

    size_t line() const { return line_; }

    // peek at next token without consuming
    std::string peek() {
        size_t save_pos = pos_;
        size_t save_line = line_;
        std::string t = eof() ? std::string() : next("token");
        pos_ = save_pos;
        line_ = save_line;
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string text_;
    size_t pos_ = 0;
    size_t line_ = 1;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write file '" + path + "'");
    out << content;
}

/// Shortest round-trip decimal form; keeps file output byte-stable.
inline std::string double_to_text(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace gapred
