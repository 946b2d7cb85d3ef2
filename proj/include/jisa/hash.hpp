#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "jisa/puzzle.hpp"

namespace jisa {

// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);
// Hash of the piece size and every piece's pixels in id order.
std::string pieces_hash(std::span<const Piece> pieces);

}  // namespace jisa
