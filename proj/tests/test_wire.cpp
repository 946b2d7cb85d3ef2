#include "doctest.h"

#include "json.hpp"

#include "jisa/errors.hpp"
#include "jisa/wire.hpp"

using namespace jisa;

namespace {

std::vector<OccupiedCell> sample_cluster() {
  return {{{0, 0}, 4, Rotation(1)}, {{0, 1}, 2, Rotation(0)}, {{1, 1}, 7, Rotation(3)}};
}

std::vector<SupervisorEvent> every_event() {
  MergeRequest mr;
  mr.request_id = 17;
  mr.edge = {4, 2, Rotation(1), Rotation(0)};
  mr.location_i = {0, 0};
  mr.location_j = {0, 1};
  mr.entropy_i = 3.25;
  mr.entropy_j = 0.125;
  mr.threshold = 4.5;
  mr.timeout_ms = 30000;
  mr.cluster = sample_cluster();
  mr.preview_png = {0x89, 'P', 'N', 'G', 0, 255, 1};

  TrimProposal tp;
  tp.request_id = 18;
  tp.frame = {{-1, 2}, FrameOrientation::portrait, 18, 24};
  tp.pieces_inside = 400;
  tp.timeout_ms = 500;
  tp.cluster = sample_cluster();

  Progress pr;
  pr.fraction = 0.5;
  pr.log = "merged 4 and 2";
  pr.cluster = sample_cluster();
  pr.preview_png = {1, 2, 3};

  return {mr,
          MergeResponse{17, MergeDecision::decline},
          MergeResponse{19, MergeDecision::approve},
          DeletePieces{{3, 1, 4}},
          tp,
          TrimResponse{18, true, std::nullopt},
          TrimResponse{18, false, TrimFrame{{0, 1}, FrameOrientation::landscape, 18, 24}},
          pr};
}

}  // namespace

TEST_CASE("every message survives a round trip") {
  for (const auto& event : every_event()) {
    const std::string name = type_name(event);
    CAPTURE(name);
    const WireMessage msg{"session-42", event};
    const auto text = to_wire(msg);
    CHECK(from_wire(text) == msg);
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("type") == type_name(event));
    CHECK(j.at("session_id") == "session-42");
    CHECK(j.contains("payload"));
    CHECK(j.contains("request_id") == (request_id_of(event) != 0));
  }
}

TEST_CASE("documented field names") {
  const auto j = nlohmann::json::parse(to_wire({"s", every_event()[0]}));
  const auto& p = j.at("payload");
  CHECK(p.at("edge").at("rot_i") == 1);
  CHECK(p.at("cluster").at(0).at("id") == 4);
  CHECK(p.at("preview_png").get<std::string>() == base64_encode(std::vector<std::uint8_t>{0x89, 'P', 'N', 'G', 0, 255, 1}));
  const auto t = nlohmann::json::parse(to_wire({"s", every_event()[6]}));
  CHECK(t.at("payload").at("approve") == false);
  CHECK(t.at("payload").at("frame").at("orientation") == "landscape");
}

TEST_CASE("hand-written client messages parse") {
  const auto m = from_wire(R"({"type":"MergeResponse","session_id":"x","request_id":5,"payload":{"decision":"approve"}})");
  CHECK(std::get<MergeResponse>(m.event) == MergeResponse{5, MergeDecision::approve});
  const auto d = from_wire(R"({"type":"DeletePieces","payload":{"ids":[1,2]}})");
  CHECK(std::get<DeletePieces>(d.event).ids == std::vector<PieceId>{1, 2});
  CHECK(d.session_id.empty());
}

TEST_CASE("malformed messages are input errors") {
  const char* bad[] = {
      "",
      "not json",
      "[1,2]",
      R"({"payload":{}})",
      R"({"type":"Bogus","payload":{}})",
      R"({"type":"MergeResponse","request_id":1,"payload":{"decision":"maybe"}})",
      R"({"type":"MergeResponse","request_id":1,"payload":{}})",
      R"({"type":"MergeResponse","request_id":-1,"payload":{"decision":"approve"}})",
      R"({"type":"DeletePieces","payload":{"ids":"all"}})",
      R"({"type":"TrimResponse","request_id":1,"payload":{"approve":false,"frame":{"origin":{"row":0}}}})",
      R"({"type":"Progress","payload":{"fraction":0.5,"preview_png":"@@@"}})",
  };
  for (const std::string text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(from_wire(text), InputError);
  }
}

TEST_CASE("base64") {
  const std::vector<std::uint8_t> bytes{0, 1, 2, 250, 251, 252, 253, 254, 255};
  CHECK(base64_decode(base64_encode(bytes)) == bytes);
  CHECK(base64_encode(std::vector<std::uint8_t>{'M', 'a', 'n'}) == "TWFu");
  CHECK(base64_encode(std::vector<std::uint8_t>{}).empty());
  CHECK_THROWS_AS(base64_decode("TW!u"), InputError);
  CHECK_THROWS_AS(base64_decode("TQ==x"), InputError);
  CHECK(base64_decode("TQ==") == std::vector<std::uint8_t>{'M'});
}
