#pragma once

#include <string>
#include <string_view>

#include "prefboard/core/types.hpp"

namespace prefboard {

/// Lowercase hex SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

/// Length-prefixed canonical serialization of (turns, response_a, response_b)
/// with every text NFC-normalized and LF-terminated.
std::string canonical_bytes(const std::vector<Turn>& turns, std::string_view response_a,
                            std::string_view response_b);

/// 64-hex-character content id of an instance. Labels and model names do not
/// participate.
std::string canonical_hash(const PreferenceInstance& instance);

/// Digest of a criteria list in its given order.
std::string criteria_hash(const std::vector<std::string>& items);

}  // namespace prefboard
