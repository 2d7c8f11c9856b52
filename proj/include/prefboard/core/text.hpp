#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace prefboard::text {

/// Unicode NFC normalization of a UTF-8 string. Invalid sequences become U+FFFD.
std::string nfc(std::string_view utf8);

/// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view s);

/// NFC + LF newlines; the form every hashed text goes through.
std::string canonical(std::string_view s);

std::string trim(std::string_view s);

/// Trim and replace every internal whitespace run with one space.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

/// Lowercased word tokens split on ASCII non-alphanumerics. Bytes >= 0x80
/// are treated as word characters so multi-byte code points stay intact.
std::vector<std::string> tokenize_words(std::string_view s);

/// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace prefboard::text
