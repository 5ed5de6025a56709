#include "cdeal/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace cdeal {

double round12(double value) {
    if (!std::isfinite(value) || value == 0.0) return value;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    double out = 0.0;
    std::from_chars(buf, res.ptr, out);
    return out;
}

std::string format_number(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string format_exact(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Json json_array(const Vector& values) {
    Json arr = Json::array();
    for (Index i = 0; i < values.size(); ++i) arr.push_back(round12(values[i]));
    return arr;
}

Json parse_json_strict(std::string_view text, std::string_view what) {
    std::vector<std::set<std::string>> keys;
    std::string duplicate;
    auto callback = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
        switch (event) {
        case Json::parse_event_t::object_start:
            keys.emplace_back();
            break;
        case Json::parse_event_t::object_end:
            if (!keys.empty()) keys.pop_back();
            break;
        case Json::parse_event_t::key: {
            auto name = parsed.get<std::string>();
            if (!keys.empty() && !keys.back().insert(name).second && duplicate.empty())
                duplicate = name;
            break;
        }
        default:
            break;
        }
        return true;
    };
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end(), callback);
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
    }
    if (!duplicate.empty())
        throw ParseError(std::string(what) + ": duplicate key \"" + duplicate + "\"");
    return doc;
}

double parse_number(std::string_view text, std::string_view where) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError(std::string(where) + ": not a number: '" + std::string(text) + "'");
    if (!std::isfinite(value))
        throw ParseError(std::string(where) + ": non-finite value");
    return value;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cdeal
