#include "zipfian/note_event.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"

namespace zipfian {

namespace {

constexpr std::array<std::string_view, 7> kNames = {
    "geomungo", "piri", "gayageum", "daegeum", "haegeum", "ajaeng", "voice"};

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view instrument_name(Instrument instrument) {
  return kNames[static_cast<size_t>(instrument)];
}

Instrument parse_instrument(std::string_view name) {
  std::string low = lower(name);
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (low == kNames[i]) return static_cast<Instrument>(i);
  }
  throw MappingError("unknown instrument '" + std::string(name) + "'");
}

bool find_instrument(std::string_view text, Instrument& out) {
  std::string low = lower(text);
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (low.find(kNames[i]) != std::string::npos) {
      out = static_cast<Instrument>(i);
      return true;
    }
  }
  return false;
}

std::string events_to_csv(std::span<const NoteEvent> events) {
  std::string out = "piece_id,instrument,pitch,duration_num,duration_den\n";
  for (const NoteEvent& e : events) {
    out += csv_quote(e.piece_id);
    out += ',';
    out += instrument_name(e.instrument);
    out += ',';
    out += e.pitch.str();
    out += ',';
    out += std::to_string(e.duration.num());
    out += ',';
    out += std::to_string(e.duration.den());
    out += '\n';
  }
  return out;
}

std::vector<NoteEvent> events_from_csv(std::string_view csv) {
  auto lines = split_lines(csv);
  if (lines.empty()) throw DataError("empty event CSV");
  if (lines[0] != "piece_id,instrument,pitch,duration_num,duration_den") {
    throw ParseError("unexpected event CSV header", 1);
  }
  std::vector<NoteEvent> events;
  events.reserve(lines.size() - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i + 1);
    auto fields = csv_split(lines[i], line_no);
    if (fields.size() != 5) {
      throw ParseError("expected 5 fields in event CSV", line_no);
    }
    NoteEvent e;
    e.piece_id = fields[0];
    e.instrument = parse_instrument(fields[1]);
    e.pitch = parse_pitch(fields[2]);
    e.duration = Rational(parse_int64(fields[3]), parse_int64(fields[4]));
    if (!e.duration.positive()) throw ParseError("non-positive duration", line_no);
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace zipfian
