#include "jisa/wire.hpp"

#include <boost/beast/core/detail/base64.hpp>

#include "jisa/errors.hpp"
#include "jisa/serialization.hpp"

namespace jisa {

namespace b64 = boost::beast::detail::base64;

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::vector<std::uint8_t> out(b64::decoded_size(text.size()));
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  // Decoding stops at padding; anything else left over is an error.
  if (text.find_first_not_of('=', read) != std::string::npos || text.size() - read > 2) {
    throw InputError("invalid base64");
  }
  out.resize(written);
  return out;
}

namespace {

const char* decision_name(MergeDecision d) { return d == MergeDecision::approve ? "approve" : "decline"; }

MergeDecision decision_from(const std::string& s) {
  if (s == "approve") return MergeDecision::approve;
  if (s == "decline") return MergeDecision::decline;
  throw InputError("unknown merge decision '" + s + "'");
}

json payload_of(const MergeRequest& m) {
  return {{"edge", m.edge},
          {"location_i", m.location_i},
          {"location_j", m.location_j},
          {"entropy_i", m.entropy_i},
          {"entropy_j", m.entropy_j},
          {"threshold", m.threshold},
          {"timeout_ms", m.timeout_ms},
          {"cluster", m.cluster},
          {"preview_png", base64_encode(m.preview_png)}};
}

json payload_of(const MergeResponse& m) { return {{"decision", decision_name(m.decision)}}; }

json payload_of(const DeletePieces& m) { return {{"ids", m.ids}}; }

json payload_of(const TrimProposal& m) {
  return {{"frame", m.frame},
          {"pieces_inside", m.pieces_inside},
          {"timeout_ms", m.timeout_ms},
          {"cluster", m.cluster},
          {"preview_png", base64_encode(m.preview_png)}};
}

json payload_of(const TrimResponse& m) {
  json j{{"approve", m.approve}};
  if (m.frame) j["frame"] = *m.frame;
  return j;
}

json payload_of(const Progress& m) {
  return {{"fraction", m.fraction}, {"log", m.log}, {"cluster", m.cluster}, {"preview_png", base64_encode(m.preview_png)}};
}

std::vector<std::uint8_t> preview_from(const json& p) {
  return p.contains("preview_png") ? base64_decode(p.at("preview_png").get<std::string>()) : std::vector<std::uint8_t>{};
}

std::vector<OccupiedCell> cluster_from(const json& p) {
  return p.contains("cluster") ? p.at("cluster").get<std::vector<OccupiedCell>>() : std::vector<OccupiedCell>{};
}

SupervisorEvent event_from(const std::string& type, std::uint64_t request_id, const json& p) {
  if (type == "MergeRequest") {
    MergeRequest m;
    m.request_id = request_id;
    m.edge = p.at("edge").get<EdgeConfig>();
    m.location_i = p.at("location_i").get<Cell>();
    m.location_j = p.at("location_j").get<Cell>();
    m.entropy_i = p.at("entropy_i").get<double>();
    m.entropy_j = p.at("entropy_j").get<double>();
    m.threshold = p.at("threshold").get<double>();
    m.timeout_ms = p.at("timeout_ms").get<std::int64_t>();
    m.cluster = cluster_from(p);
    m.preview_png = preview_from(p);
    return m;
  }
  if (type == "MergeResponse") return MergeResponse{request_id, decision_from(p.at("decision").get<std::string>())};
  if (type == "DeletePieces") return DeletePieces{p.at("ids").get<std::vector<PieceId>>()};
  if (type == "TrimProposal") {
    TrimProposal m;
    m.request_id = request_id;
    m.frame = p.at("frame").get<TrimFrame>();
    m.pieces_inside = p.at("pieces_inside").get<int>();
    m.timeout_ms = p.at("timeout_ms").get<std::int64_t>();
    m.cluster = cluster_from(p);
    m.preview_png = preview_from(p);
    return m;
  }
  if (type == "TrimResponse") {
    TrimResponse m{request_id, p.at("approve").get<bool>(), std::nullopt};
    if (p.contains("frame") && !p.at("frame").is_null()) m.frame = p.at("frame").get<TrimFrame>();
    return m;
  }
  if (type == "Progress") {
    Progress m;
    m.fraction = p.at("fraction").get<double>();
    m.log = p.value("log", std::string{});
    m.cluster = cluster_from(p);
    m.preview_png = preview_from(p);
    return m;
  }
  throw InputError("unknown message type '" + type + "'");
}

}  // namespace

std::string to_wire(const WireMessage& message) {
  json j{{"type", type_name(message.event)}, {"session_id", message.session_id}};
  std::visit(
      [&](const auto& e) {
        if constexpr (requires { e.request_id; }) j["request_id"] = e.request_id;
        j["payload"] = payload_of(e);
      },
      message.event);
  return j.dump();
}

WireMessage from_wire(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw InputError("message is not a JSON object");
    const auto type = j.at("type").get<std::string>();
    std::uint64_t request_id = 0;
    if (j.contains("request_id")) {
      if (!j.at("request_id").is_number_unsigned()) throw InputError("request_id must be a non-negative integer");
      request_id = j.at("request_id").get<std::uint64_t>();
    }
    const json empty = json::object();
    const json& payload = j.contains("payload") ? j.at("payload") : empty;
    return {j.value("session_id", std::string{}), event_from(type, request_id, payload)};
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed message: ") + e.what());
  }
}

}  // namespace jisa
