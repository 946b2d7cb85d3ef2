#pragma once

#include <string>

#include "jisa/supervisor.hpp"

namespace jisa {

// One message on the supervisor channel:
//   {"type": <variant name>, "session_id": ..., "request_id"?: ..., "payload": {...}}
// PNG previews travel base64-encoded.
struct WireMessage {
  std::string session_id;
  SupervisorEvent event;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

std::string to_wire(const WireMessage& message);
// Throws InputError on malformed JSON, unknown types or missing fields.
WireMessage from_wire(const std::string& text);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws InputError on invalid input.
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace jisa
