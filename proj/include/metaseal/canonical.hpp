#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "metaseal/errors.hpp"

namespace metaseal {

/// Document tree used for every hash input: null, bool, integer, string,
/// array, object with string keys. Floating-point leaves are rejected at
/// encode time; fractional values travel as decimal strings.
using Document = nlohmann::json;

/// Byte-deterministic JSON encoding: UTF-8, keys sorted by byte order,
/// separators "," and ":" with no whitespace, minimal string escaping,
/// base-10 integers. Structurally equal documents encode identically.
/// Throws Error(Errc::canonical) on floats or other unencodable values.
std::string canonical_encode(const Document& doc);

/// True iff canonical_encode would accept the document.
bool is_canonical_encodable(const Document& doc, std::string* reason = nullptr) noexcept;

/// Strict inverse of canonical_encode: the input must be the exact canonical
/// encoding of the returned document (duplicate keys, floats, and any
/// formatting slack are rejected). Throws Error(Errc::malformed).
Document canonical_parse(std::string_view bytes);

/// Parse JSON text tolerating arbitrary formatting but enforcing document
/// rules (no floats). For user-supplied descriptor files.
Document parse_document(std::string_view text);

// -- decimal strings ---------------------------------------------------------
// Fractional quantities are carried end-to-end as decimal strings; these
// helpers give them exact, format-independent comparison semantics.

/// True iff s matches (0|[1-9][0-9]*)(.[0-9]+)? — a non-negative decimal.
bool is_decimal_string(std::string_view s) noexcept;

/// Exact three-way comparison of two decimal strings (-1, 0, +1).
/// Throws Error(Errc::bad_argument) if either operand is not a decimal.
int compare_decimal(std::string_view lhs, std::string_view rhs);

/// True iff s is a decimal within [0, 1].
bool decimal_in_unit_interval(std::string_view s);

} // namespace metaseal
