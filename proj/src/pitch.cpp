#include "zipfian/pitch.hpp"

#include <array>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

constexpr std::array<int, 7> kStepSemitone = {9, 11, 0, 2, 4, 5, 7};  // A..G

int step_index(char step) { return step - 'A'; }

// Flat-preferring spelling of each pitch class.
struct Spelling {
  char step;
  int alter;
};
constexpr std::array<Spelling, 12> kFlatSpelling = {{
    {'C', 0}, {'D', -1}, {'D', 0}, {'E', -1}, {'E', 0}, {'F', 0},
    {'G', -1}, {'G', 0}, {'A', -1}, {'A', 0}, {'B', -1}, {'B', 0},
}};

}  // namespace

std::string Pitch::str() const {
  std::string out(1, step);
  if (alter < 0) out.append(-alter, 'b');
  if (alter > 0) out.append(alter, '#');
  out += std::to_string(octave);
  return out;
}

int Pitch::midi() const {
  return (octave + 1) * 12 + kStepSemitone[step_index(step)] + alter;
}

Pitch make_pitch(char step, int alter, int octave) {
  if (step < 'A' || step > 'G') {
    throw DataError(std::string("invalid pitch step '") + step + "'");
  }
  if (alter < -2 || alter > 2) {
    throw DataError("pitch alter " + std::to_string(alter) + " outside [-2, 2]");
  }
  if (octave < 0 || octave > 9) {
    throw DataError("pitch octave " + std::to_string(octave) + " outside [0, 9]");
  }
  return Pitch{step, alter, octave};
}

Pitch parse_pitch(std::string_view text) {
  if (text.empty()) throw DataError("empty pitch");
  char step = text[0];
  size_t i = 1;
  int alter = 0;
  while (i < text.size() && (text[i] == 'b' || text[i] == '#')) {
    alter += text[i] == 'b' ? -1 : 1;
    ++i;
  }
  if (i >= text.size()) throw DataError("pitch '" + std::string(text) + "' missing octave");
  int octave = 0;
  bool any = false;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw DataError("invalid pitch '" + std::string(text) + "'");
    }
    octave = octave * 10 + (text[i] - '0');
    any = true;
  }
  if (!any) throw DataError("pitch '" + std::string(text) + "' missing octave");
  return make_pitch(step, alter, octave);
}

Pitch pitch_from_midi_flat(int midi) {
  int octave = midi / 12 - 1;
  int pc = midi % 12;
  if (pc < 0) {
    pc += 12;
    --octave;
  }
  const Spelling& s = kFlatSpelling[pc];
  return make_pitch(s.step, s.alter, octave);
}

}  // namespace zipfian
