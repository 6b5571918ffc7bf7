#include "metaseal/canonical.hpp"

#include <cstdio>

namespace metaseal {

namespace {

void encode_string(const std::string& s, std::string& out)
{
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\b':
            out += "\\b";
            break;
        case '\f':
            out += "\\f";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\r':
            out += "\\r";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
}

void encode_value(const Document& doc, std::string& out)
{
    switch (doc.type()) {
    case nlohmann::json::value_t::null:
        out += "null";
        break;
    case nlohmann::json::value_t::boolean:
        out += doc.get<bool>() ? "true" : "false";
        break;
    case nlohmann::json::value_t::number_integer:
        out += std::to_string(doc.get<std::int64_t>());
        break;
    case nlohmann::json::value_t::number_unsigned:
        out += std::to_string(doc.get<std::uint64_t>());
        break;
    case nlohmann::json::value_t::string:
        encode_string(doc.get_ref<const std::string&>(), out);
        break;
    case nlohmann::json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& item : doc) {
            if (!first)
                out += ',';
            first = false;
            encode_value(item, out);
        }
        out += ']';
        break;
    }
    case nlohmann::json::value_t::object: {
        // nlohmann objects are std::map-backed: iteration is already in key
        // byte order.
        out += '{';
        bool first = true;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!first)
                out += ',';
            first = false;
            encode_string(it.key(), out);
            out += ':';
            encode_value(it.value(), out);
        }
        out += '}';
        break;
    }
    case nlohmann::json::value_t::number_float:
        throw Error(Errc::canonical,
                    "floating-point values are not canonical; carry fractions as decimal strings");
    default:
        throw Error(Errc::canonical, "value type is not canonical");
    }
}

} // namespace

std::string canonical_encode(const Document& doc)
{
    std::string out;
    encode_value(doc, out);
    return out;
}

bool is_canonical_encodable(const Document& doc, std::string* reason) noexcept
{
    try {
        canonical_encode(doc);
        return true;
    } catch (const Error& e) {
        if (reason)
            *reason = e.what();
        return false;
    } catch (...) {
        if (reason)
            *reason = "unencodable document";
        return false;
    }
}

Document canonical_parse(std::string_view bytes)
{
    Document doc = Document::parse(bytes, nullptr, false);
    if (doc.is_discarded())
        throw Error(Errc::malformed, "not valid JSON");
    std::string reencoded;
    try {
        reencoded = canonical_encode(doc);
    } catch (const Error& e) {
        throw Error(Errc::malformed, e.what());
    }
    // Byte-exact round trip rules out duplicate keys, formatting slack, and
    // any value the canonical grammar cannot represent.
    if (reencoded != bytes)
        throw Error(Errc::malformed, "bytes are not in canonical form");
    return doc;
}

Document parse_document(std::string_view text)
{
    Document doc = Document::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(Errc::malformed, "not valid JSON");
    std::string reason;
    if (!is_canonical_encodable(doc, &reason))
        throw Error(Errc::malformed, reason);
    return doc;
}

// -- decimal strings -----------------------------------------------------------

namespace {

struct DecimalParts {
    std::string_view integer;
    std::string_view fraction; // trailing zeros stripped
};

bool split_decimal(std::string_view s, DecimalParts& out) noexcept
{
    if (s.empty())
        return false;
    std::size_t dot = s.find('.');
    std::string_view intpart = dot == std::string_view::npos ? s : s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (intpart.empty())
        return false;
    if (dot != std::string_view::npos && frac.empty())
        return false;
    for (char c : intpart)
        if (c < '0' || c > '9')
            return false;
    if (intpart.size() > 1 && intpart.front() == '0')
        return false;
    for (char c : frac)
        if (c < '0' || c > '9')
            return false;
    while (!frac.empty() && frac.back() == '0')
        frac.remove_suffix(1);
    out = {intpart, frac};
    return true;
}

} // namespace

bool is_decimal_string(std::string_view s) noexcept
{
    DecimalParts parts;
    return split_decimal(s, parts);
}

int compare_decimal(std::string_view lhs, std::string_view rhs)
{
    DecimalParts a, b;
    if (!split_decimal(lhs, a))
        throw Error(Errc::bad_argument, "not a decimal string: \"" + std::string(lhs) + "\"");
    if (!split_decimal(rhs, b))
        throw Error(Errc::bad_argument, "not a decimal string: \"" + std::string(rhs) + "\"");
    if (a.integer.size() != b.integer.size())
        return a.integer.size() < b.integer.size() ? -1 : 1;
    if (int c = a.integer.compare(b.integer); c != 0)
        return c < 0 ? -1 : 1;
    if (int c = a.fraction.compare(b.fraction); c != 0)
        return c < 0 ? -1 : 1;
    return 0;
}

bool decimal_in_unit_interval(std::string_view s)
{
    return is_decimal_string(s) && compare_decimal(s, "1") <= 0;
}

} // namespace metaseal
