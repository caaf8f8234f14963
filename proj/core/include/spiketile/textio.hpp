// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// textio.hpp - helpers for the line-oriented text formats
#ifndef SPIKETILE_TEXTIO_HPP
#define SPIKETILE_TEXTIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spiketile
{

// One physical line with its 1-based number, comments and blanks stripped.
struct TextLine
{
    int number{0};
    std::string text;
};

// Read a whole file, dropping blank lines and '#' comments. Throws ParseError
// if the file cannot be opened.
std::vector<TextLine> read_lines(const std::string &path);

// Same stripping applied to an in-memory string.
std::vector<TextLine> split_content_lines(const std::string &content);

std::vector<std::string> split_fields(const std::string &text);

// Strict numeric parsing; `where` names the file/line for error messages.
std::uint64_t parse_u64(const std::string &token, const std::string &where);
std::int64_t parse_i64(const std::string &token, const std::string &where);
double parse_double(const std::string &token, const std::string &where);

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

void write_file(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

// Flat `key = value` file. Keys keep file order for serialization; lookups
// are by exact key. Duplicate keys are a parse error.
class KeyValueFile
{
public:
    KeyValueFile() = default;

    static KeyValueFile load(const std::string &path);
    static KeyValueFile parse(const std::string &content, const std::string &name);

    void set(const std::string &key, const std::string &value);
    bool has(const std::string &key) const;
    const std::string &get(const std::string &key) const;
    std::string get_or(const std::string &key, const std::string &fallback) const;
    double get_double(const std::string &key) const;
    std::uint64_t get_u64(const std::string &key) const;

    const std::vector<std::pair<std::string, std::string>> &entries() const
    {
        return entries_;
    }

    std::string serialize() const;
    void save(const std::string &path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::size_t> index_;
    std::string name_{"<memory>"};
};

}

#endif
