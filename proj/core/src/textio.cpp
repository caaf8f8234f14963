// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/textio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spiketile/errors.hpp"

namespace spiketile
{

namespace
{

std::vector<TextLine> strip_lines(std::istream &in)
{
    std::vector<TextLine> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw))
    {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
        {
            raw.erase(hash);
        }
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
        {
            continue;
        }
        const auto end = raw.find_last_not_of(" \t\r");
        lines.push_back({number, raw.substr(begin, end - begin + 1)});
    }
    return lines;
}

}

std::vector<TextLine> read_lines(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ParseError("cannot open file: " + path);
    }
    return strip_lines(in);
}

std::vector<TextLine> split_content_lines(const std::string &content)
{
    std::istringstream in(content);
    return strip_lines(in);
}

std::vector<std::string> split_fields(const std::string &text)
{
    std::vector<std::string> fields;
    std::istringstream stream(text);
    std::string field;
    while (stream >> field)
    {
        fields.push_back(field);
    }
    return fields;
}

std::uint64_t parse_u64(const std::string &token, const std::string &where)
{
    errno = 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0' || token[0] == '-')
    {
        throw ParseError(where + ": expected unsigned integer, got '" + token + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::int64_t parse_i64(const std::string &token, const std::string &where)
{
    errno = 0;
    char *end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0')
    {
        throw ParseError(where + ": expected integer, got '" + token + "'");
    }
    return static_cast<std::int64_t>(v);
}

double parse_double(const std::string &token, const std::string &where)
{
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (errno != 0 || end == token.c_str() || *end != '\0')
    {
        throw ParseError(where + ": expected number, got '" + token + "'");
    }
    return v;
}

std::string format_double(double value)
{
    // Try increasing precision until the text parses back to the same bits.
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision)
    {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value)
        {
            return buf;
        }
    }
    return buf;
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ParseError("cannot write file: " + path);
    }
    out << content;
    if (!out)
    {
        throw ParseError("short write: " + path);
    }
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ParseError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

KeyValueFile KeyValueFile::load(const std::string &path)
{
    KeyValueFile kv = parse(read_file(path), path);
    return kv;
}

KeyValueFile KeyValueFile::parse(const std::string &content, const std::string &name)
{
    KeyValueFile kv;
    kv.name_ = name;
    std::istringstream stream(content);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw))
    {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
        {
            raw.erase(hash);
        }
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
        {
            continue;
        }
        const auto end = raw.find_last_not_of(" \t\r");
        const std::string line = raw.substr(begin, end - begin + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw ParseError(name + ":" + std::to_string(number) +
                             ": expected 'key = value'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
        {
            throw ParseError(name + ":" + std::to_string(number) + ": empty key");
        }
        if (kv.index_.count(key) != 0)
        {
            throw ParseError(name + ":" + std::to_string(number) + ": duplicate key '" +
                             key + "'");
        }
        kv.index_[key] = kv.entries_.size();
        kv.entries_.emplace_back(key, value);
    }
    return kv;
}

void KeyValueFile::set(const std::string &key, const std::string &value)
{
    if (const auto it = index_.find(key); it != index_.end())
    {
        entries_[it->second].second = value;
        return;
    }
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
}

bool KeyValueFile::has(const std::string &key) const
{
    return index_.count(key) != 0;
}

const std::string &KeyValueFile::get(const std::string &key) const
{
    const auto it = index_.find(key);
    if (it == index_.end())
    {
        throw ParseError(name_ + ": missing key '" + key + "'");
    }
    return entries_[it->second].second;
}

std::string KeyValueFile::get_or(const std::string &key, const std::string &fallback) const
{
    return has(key) ? get(key) : fallback;
}

double KeyValueFile::get_double(const std::string &key) const
{
    return parse_double(get(key), name_ + ": key '" + key + "'");
}

std::uint64_t KeyValueFile::get_u64(const std::string &key) const
{
    return parse_u64(get(key), name_ + ": key '" + key + "'");
}

std::string KeyValueFile::serialize() const
{
    std::string out;
    for (const auto &[key, value] : entries_)
    {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

void KeyValueFile::save(const std::string &path) const
{
    write_file(path, serialize());
}

}
