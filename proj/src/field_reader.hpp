#pragma once

#include <set>
#include <string>

#include "metaseal/canonical.hpp"
#include "metaseal/crypto.hpp"
#include "metaseal/errors.hpp"

namespace metaseal::detail {

/// Strict object reader: every field must be consumed exactly once and
/// unknown fields are rejected, so mutated or reshaped envelopes surface as
/// MALFORMED instead of being partially read.
class FieldReader {
public:
    explicit FieldReader(const Document& doc, std::string what)
        : doc_(doc), what_(std::move(what))
    {
        if (!doc.is_object())
            throw Error(Errc::malformed, what_ + " must be a JSON object");
    }

    const Document& get(const std::string& key)
    {
        auto it = doc_.find(key);
        if (it == doc_.end())
            throw Error(Errc::malformed, what_ + " is missing field \"" + key + "\"");
        seen_.insert(key);
        return *it;
    }

    const Document* get_optional(const std::string& key)
    {
        auto it = doc_.find(key);
        if (it == doc_.end())
            return nullptr;
        seen_.insert(key);
        return &*it;
    }

    std::string str(const std::string& key)
    {
        const Document& value = get(key);
        if (!value.is_string())
            throw Error(Errc::malformed, what_ + " field \"" + key + "\" must be a string");
        return value.get<std::string>();
    }

    std::int64_t integer(const std::string& key)
    {
        const Document& value = get(key);
        if (!value.is_number_integer() && !value.is_number_unsigned())
            throw Error(Errc::malformed, what_ + " field \"" + key + "\" must be an integer");
        return value.get<std::int64_t>();
    }

    Digest digest(const std::string& key)
    {
        std::string hex = str(key);
        if (!Digest::is_valid_hex(hex))
            throw Error(Errc::malformed,
                        what_ + " field \"" + key + "\" is not a 64-hex digest");
        return Digest::from_hex(hex);
    }

    Timestamp timestamp(const std::string& key)
    {
        std::string wire = str(key);
        if (!Timestamp::is_valid_wire(wire))
            throw Error(Errc::malformed,
                        what_ + " field \"" + key + "\" is not a timestamp wire string");
        return Timestamp::from_wire(wire);
    }

    const Document& object(const std::string& key)
    {
        const Document& value = get(key);
        if (!value.is_object())
            throw Error(Errc::malformed, what_ + " field \"" + key + "\" must be an object");
        return value;
    }

    const Document& array(const std::string& key)
    {
        const Document& value = get(key);
        if (!value.is_array())
            throw Error(Errc::malformed, what_ + " field \"" + key + "\" must be an array");
        return value;
    }

    void finish() const
    {
        for (auto it = doc_.begin(); it != doc_.end(); ++it)
            if (!seen_.contains(it.key()))
                throw Error(Errc::malformed, what_ + " has unexpected field \"" + it.key() + "\"");
    }

private:
    const Document& doc_;
    std::string what_;
    std::set<std::string> seen_;
};

} // namespace metaseal::detail
