#include "zipfian/normalize.hpp"

#include <cmath>

#include <json.hpp>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

Rational scale_from_json(const nlohmann::json& value, const std::string& piece) {
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_float()) {
    double x = value.get<double>();
    // Scales are halves by convention; accept anything on a /2 grid.
    double doubled = x * 2.0;
    if (std::abs(doubled - std::round(doubled)) > 1e-9) {
      throw DataError("duration scale for '" + piece +
                      "' is not a multiple of 1/2; write it as a fraction string");
    }
    return Rational(static_cast<std::int64_t>(std::llround(doubled)), 2);
  }
  throw DataError("invalid duration scale for '" + piece + "'");
}

}  // namespace

NormalizationPolicy NormalizationPolicy::standard() {
  NormalizationPolicy policy;
  policy.octave_shift = {
      {Instrument::Daegeum, -1}, {Instrument::Gayageum, 1},
      {Instrument::Geomungo, 1}, {Instrument::Ajaeng, 1},
      {Instrument::Piri, 0},     {Instrument::Haegeum, 0},
      {Instrument::Voice, 0},
  };
  return policy;
}

NormalizationPolicy NormalizationPolicy::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("policy config: ") + e.what(), 1);
  }
  NormalizationPolicy policy = standard();
  if (doc.contains("octave_shift")) {
    for (const auto& [name, shift] : doc["octave_shift"].items()) {
      policy.octave_shift[parse_instrument(name)] = shift.get<int>();
    }
  }
  if (doc.contains("duration_scale")) {
    for (const auto& [piece, scale] : doc["duration_scale"].items()) {
      Rational r = scale_from_json(scale, piece);
      if (!r.positive()) throw DataError("non-positive duration scale for '" + piece + "'");
      policy.duration_scale[piece] = r;
    }
  }
  return policy;
}

int NormalizationPolicy::shift_for(Instrument instrument) const {
  auto it = octave_shift.find(instrument);
  return it == octave_shift.end() ? 0 : it->second;
}

Rational NormalizationPolicy::scale_for(std::string_view piece_id) const {
  auto it = duration_scale.find(piece_id);
  return it == duration_scale.end() ? Rational(1) : it->second;
}

std::vector<NoteEvent> normalize_events(std::span<const NoteEvent> events,
                                        const NormalizationPolicy& policy) {
  std::vector<NoteEvent> out;
  out.reserve(events.size());
  for (const NoteEvent& e : events) {
    NoteEvent n = e;
    int shift = policy.shift_for(e.instrument);
    int octave = e.pitch.octave + shift;
    if (octave < 0 || octave > 9) {
      throw DataError("octave shift moves " + e.pitch.str() + " outside [0, 9]");
    }
    n.pitch.octave = octave;
    n.duration = e.duration * policy.scale_for(e.piece_id);
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace zipfian
