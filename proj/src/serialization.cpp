#include "jisa/serialization.hpp"

#include <cstring>
#include <fstream>

#include "jisa/errors.hpp"

namespace jisa {

namespace {

constexpr char kCacheMagic[8] = {'J', 'I', 'S', 'A', 'T', 'B', 'L', '1'};

template <class Enum, std::size_t N>
Enum enum_from(const std::string& name, const Enum (&values)[N], const char* what) {
  for (Enum v : values) {
    if (name == to_string(v)) return v;
  }
  throw InputError(std::string("unknown ") + what + " '" + name + "'");
}

}  // namespace

void to_json(json& j, const Cell& c) { j = json{{"row", c.row}, {"col", c.col}}; }

void from_json(const json& j, Cell& c) {
  c.row = j.at("row").get<int>();
  c.col = j.at("col").get<int>();
}

void to_json(json& j, const EdgeConfig& e) {
  j = json{{"i", e.i}, {"j", e.j}, {"rot_i", e.rot_i.quarter_turns()}, {"rot_j", e.rot_j.quarter_turns()}};
}

void from_json(const json& j, EdgeConfig& e) {
  e.i = j.at("i").get<int>();
  e.j = j.at("j").get<int>();
  e.rot_i = Rotation(j.at("rot_i").get<int>());
  e.rot_j = Rotation(j.at("rot_j").get<int>());
}

void to_json(json& j, const OccupiedCell& oc) {
  j = json{{"row", oc.cell.row}, {"col", oc.cell.col}, {"id", oc.id}, {"rot", oc.rot.quarter_turns()}};
}

void from_json(const json& j, OccupiedCell& oc) {
  oc.cell = {j.at("row").get<int>(), j.at("col").get<int>()};
  oc.id = j.at("id").get<int>();
  oc.rot = Rotation(j.at("rot").get<int>());
}

void to_json(json& j, const TrimFrame& f) {
  j = json{{"origin", f.origin},
           {"orientation", f.orientation == FrameOrientation::landscape ? "landscape" : "portrait"},
           {"rows", f.rows},
           {"cols", f.cols}};
}

void from_json(const json& j, TrimFrame& f) {
  f.origin = j.at("origin").get<Cell>();
  const auto o = j.at("orientation").get<std::string>();
  if (o == "landscape") {
    f.orientation = FrameOrientation::landscape;
  } else if (o == "portrait") {
    f.orientation = FrameOrientation::portrait;
  } else {
    throw InputError("unknown frame orientation '" + o + "'");
  }
  f.rows = j.at("rows").get<int>();
  f.cols = j.at("cols").get<int>();
}

void to_json(json& j, const Placement& p) {
  json pieces = json::array();
  for (const auto& pp : p.pieces) {
    pieces.push_back({{"id", pp.id}, {"row", pp.row}, {"col", pp.col}, {"rot", pp.rot.quarter_turns()}});
  }
  j = json{{"pieces", std::move(pieces)}, {"rows", p.spec.rows}, {"cols", p.spec.cols}, {"P", p.spec.piece_px}};
}

void from_json(const json& j, Placement& p) {
  p.spec = {j.at("rows").get<int>(), j.at("cols").get<int>(), j.at("P").get<int>()};
  p.pieces.clear();
  for (const auto& e : j.at("pieces")) {
    p.pieces.push_back({e.at("id").get<int>(), e.at("row").get<int>(), e.at("col").get<int>(),
                        Rotation(e.at("rot").get<int>())});
  }
  std::sort(p.pieces.begin(), p.pieces.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

void to_json(json& j, const StepEvent& e) {
  j = json{{"type", "step"}, {"step", e.step}, {"kind", to_string(e.kind)}};
  if (e.edge) j["edge"] = *e.edge;
  if (e.reason) j["reason"] = to_string(*e.reason);
  if (!e.pieces.empty()) j["pieces"] = e.pieces;
  if (e.placed) j["placed"] = *e.placed;
  if (e.frame) j["frame"] = *e.frame;
  switch (e.kind) {
    case StepKind::pieces_removed:
    case StepKind::queue_recycled: j["restored"] = e.count; break;
    case StepKind::trim_proposed:
    case StepKind::trim_final: j["pieces_inside"] = e.count; break;
    default: break;
  }
}

void to_json(json& j, const CoordinatorRecord& r) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, StepEvent>) {
          to_json(j, v);
        } else if constexpr (std::is_same_v<T, GateRecord>) {
          j = json{{"type", "gate"},         {"step", v.step},           {"request_id", v.request_id},
                   {"edge", v.edge},         {"entropy_i", v.entropy_i}, {"entropy_j", v.entropy_j},
                   {"threshold", v.threshold}, {"outcome", to_string(v.outcome)}, {"latency_ms", v.latency_ms}};
        } else if constexpr (std::is_same_v<T, InterventionRecord>) {
          j = json{{"type", "delete"}, {"step", v.step}, {"ids", v.ids}, {"applied", v.applied}};
          if (!v.applied) j["reason"] = v.reason;
        } else {
          j = json{{"type", "trim-review"}, {"step", v.step},
                   {"request_id", v.request_id}, {"proposed", v.proposed},
                   {"outcome", to_string(v.outcome)}, {"latency_ms", v.latency_ms}};
          if (v.edited) j["edited"] = *v.edited;
        }
      },
      r);
}

StepKind step_kind_from(const std::string& name) {
  static constexpr StepKind kAll[] = {StepKind::edge_popped,    StepKind::edge_discarded,  StepKind::merge_tentative,
                                      StepKind::merge_committed, StepKind::merge_declined, StepKind::pieces_removed,
                                      StepKind::queue_recycled, StepKind::trim_proposed,   StepKind::trim_final,
                                      StepKind::fill_placed};
  return enum_from(name, kAll, "step kind");
}

GateOutcome gate_outcome_from(const std::string& name) {
  static constexpr GateOutcome kAll[] = {GateOutcome::approve, GateOutcome::decline, GateOutcome::timeout,
                                         GateOutcome::unavailable};
  return enum_from(name, kAll, "gate outcome");
}

TrimOutcome trim_outcome_from(const std::string& name) {
  static constexpr TrimOutcome kAll[] = {TrimOutcome::approve, TrimOutcome::edit, TrimOutcome::rejected,
                                         TrimOutcome::timeout, TrimOutcome::unavailable};
  return enum_from(name, kAll, "trim outcome");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

void save_table(const std::filesystem::path& path, const CompatibilityTable& table, const std::string& key) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  const auto n = static_cast<std::uint32_t>(table.piece_count());
  const auto key_len = static_cast<std::uint32_t>(key.size());
  out.write(kCacheMagic, sizeof kCacheMagic);
  out.write(reinterpret_cast<const char*>(&key_len), sizeof key_len);
  out.write(key.data(), key_len);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  const auto& raw = table.raw_values();
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
}

std::optional<CompatibilityTable> load_table(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kCacheMagic];
  std::uint32_t key_len = 0, n = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&key_len), sizeof key_len) || key_len != key.size()) return std::nullopt;
  std::string stored(key_len, '\0');
  if (!in.read(stored.data(), key_len) || stored != key) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n) || n < 2) return std::nullopt;
  std::vector<double> raw(static_cast<std::size_t>(n) * n * 16);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)))) {
    return std::nullopt;
  }
  return normalize_table(static_cast<int>(n), std::move(raw));
}

}  // namespace jisa
