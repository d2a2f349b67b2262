#include "zipfian/units.hpp"

#include "zipfian/errors.hpp"

namespace zipfian {

UnitKind parse_unit_kind(std::string_view name) {
  if (name == "pitch") return UnitKind::Pitch;
  if (name == "duration") return UnitKind::Duration;
  if (name == "pair") return UnitKind::Pair;
  throw DataError("unknown unit kind '" + std::string(name) + "'");
}

std::string_view unit_kind_name(UnitKind kind) {
  switch (kind) {
    case UnitKind::Pitch: return "pitch";
    case UnitKind::Duration: return "duration";
    case UnitKind::Pair: return "pair";
  }
  return "?";
}

std::string ZipfianUnit::str() const {
  std::string out;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += '|';
    if (const Pitch* p = std::get_if<Pitch>(&atoms[i])) {
      out += p->str();
    } else {
      out += std::get<Rational>(atoms[i]).str();
    }
  }
  return out;
}

bool ZipfianUnit::operator==(const ZipfianUnit& other) const {
  return atoms == other.atoms;
}

ZipfianUnit ZipfianUnit::of(Pitch pitch) { return ZipfianUnit{{UnitAtom{pitch}}}; }

ZipfianUnit ZipfianUnit::of(Rational duration) {
  return ZipfianUnit{{UnitAtom{duration}}};
}

ZipfianUnit ZipfianUnit::of(Pitch pitch, Rational duration) {
  return ZipfianUnit{{UnitAtom{pitch}, UnitAtom{duration}}};
}

ZipfianUnit ZipfianUnit::parse(std::string_view text) {
  ZipfianUnit unit;
  size_t start = 0;
  while (start <= text.size()) {
    size_t bar = text.find('|', start);
    std::string_view atom = bar == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, bar - start);
    if (atom.empty()) throw DataError("empty atom in unit '" + std::string(text) + "'");
    if (atom[0] >= 'A' && atom[0] <= 'G') {
      unit.atoms.emplace_back(parse_pitch(atom));
    } else {
      unit.atoms.emplace_back(Rational::parse(atom));
    }
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (unit.atoms.empty()) throw DataError("empty unit string");
  return unit;
}

ZipfianUnit ZipfianUnit::concat(const ZipfianUnit& a, const ZipfianUnit& b) {
  ZipfianUnit unit = a;
  unit.atoms.insert(unit.atoms.end(), b.atoms.begin(), b.atoms.end());
  return unit;
}

std::vector<ZipfianUnit> build_units(std::span<const NoteEvent> events, UnitKind kind) {
  std::vector<ZipfianUnit> units;
  units.reserve(events.size());
  for (const NoteEvent& e : events) {
    switch (kind) {
      case UnitKind::Pitch: units.push_back(ZipfianUnit::of(e.pitch)); break;
      case UnitKind::Duration: units.push_back(ZipfianUnit::of(e.duration)); break;
      case UnitKind::Pair: units.push_back(ZipfianUnit::of(e.pitch, e.duration)); break;
    }
  }
  return units;
}

}  // namespace zipfian
