#include "zipfian/musicxml.hpp"

#include <map>
#include <string>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"
#include "zipfian/xml.hpp"

namespace zipfian {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

std::string where(std::string_view part_id, std::string_view measure) {
  std::string out = "part '" + std::string(part_id) + "'";
  if (!measure.empty()) out += ", measure " + std::string(measure);
  return out;
}

struct PendingTie {
  size_t event_index;
};

void read_part(const XmlElement& part, Instrument instrument,
               const std::string& piece_id, std::vector<NoteEvent>& events) {
  std::string_view part_id = part.attribute("id");
  std::int64_t divisions = 0;
  // Open tie per pitch string; ties may cross measures within a part.
  std::map<std::string, PendingTie> open_ties;

  for (const XmlElement* measure : part.children_named("measure")) {
    std::string_view measure_no = measure->attribute("number");
    for (const XmlElement& item : measure->children) {
      if (item.name == "attributes") {
        if (const XmlElement* div = item.child("divisions")) {
          divisions = parse_int64(trim(div->text));
          if (divisions <= 0) {
            throw StructuralError("non-positive divisions in " +
                                  where(part_id, measure_no));
          }
        }
        continue;
      }
      if (item.name != "note") continue;
      if (item.has_child("grace")) continue;
      if (item.has_child("rest")) continue;
      if (item.has_child("cue")) continue;
      const XmlElement* pitch_el = item.child("pitch");
      if (pitch_el == nullptr) continue;  // unpitched subset: skip

      const XmlElement* duration_el = item.child("duration");
      if (duration_el == nullptr) {
        throw StructuralError("pitched note without duration in " +
                              where(part_id, measure_no));
      }
      if (divisions == 0) {
        throw StructuralError("note before any divisions declaration in " +
                              where(part_id, measure_no));
      }

      std::string_view step_text = pitch_el->required_text("step");
      if (step_text.size() != 1) {
        throw StructuralError("invalid step '" + std::string(step_text) + "' in " +
                              where(part_id, measure_no));
      }
      int alter = 0;
      if (const XmlElement* alter_el = pitch_el->child("alter")) {
        alter = static_cast<int>(parse_int64(trim(alter_el->text)));
      }
      int octave = static_cast<int>(parse_int64(pitch_el->required_text("octave")));
      Pitch pitch;
      try {
        pitch = make_pitch(step_text[0], alter, octave);
      } catch (const DataError& e) {
        throw StructuralError(std::string(e.what()) + " in " +
                              where(part_id, measure_no));
      }

      std::int64_t ticks = parse_int64(trim(duration_el->text));
      if (ticks <= 0) {
        throw StructuralError("non-positive note duration in " +
                              where(part_id, measure_no));
      }
      Rational duration(ticks, divisions);

      bool tie_start = false;
      bool tie_stop = false;
      for (const XmlElement* tie : item.children_named("tie")) {
        std::string_view type = tie->attribute("type");
        if (type == "start") tie_start = true;
        if (type == "stop") tie_stop = true;
      }

      std::string key = pitch.str();
      if (tie_stop) {
        auto it = open_ties.find(key);
        if (it != open_ties.end()) {
          // Continuation of a tied note: extend the sounding event.
          events[it->second.event_index].duration =
              events[it->second.event_index].duration + duration;
          if (!tie_start) open_ties.erase(it);
          continue;
        }
        // Dangling tie stop: treat as an ordinary note.
      }
      events.push_back(NoteEvent{pitch, duration, instrument, piece_id});
      if (tie_start) {
        open_ties[key] = PendingTie{events.size() - 1};
      }
    }
  }
}

}  // namespace

std::vector<NoteEvent> parse_musicxml(std::string_view document,
                                      std::string_view fallback_piece_id) {
  XmlElement root = parse_xml(document);
  if (root.name != "score-partwise") {
    throw StructuralError("expected <score-partwise> root, found <" + root.name + ">");
  }

  std::string piece_id(fallback_piece_id);
  if (const XmlElement* work = root.child("work")) {
    if (const XmlElement* title = work->child("work-title")) {
      std::string_view t = trim(title->text);
      if (!t.empty()) piece_id = std::string(t);
    }
  }

  const XmlElement* part_list = root.child("part-list");
  if (part_list == nullptr) throw StructuralError("missing <part-list>");
  std::map<std::string, Instrument, std::less<>> instruments;
  for (const XmlElement* score_part : part_list->children_named("score-part")) {
    std::string id(score_part->attribute("id"));
    std::string_view part_name = score_part->required_text("part-name");
    Instrument instrument;
    if (!find_instrument(part_name, instrument)) {
      throw StructuralError("part-name '" + std::string(part_name) +
                            "' does not name a known instrument");
    }
    instruments[id] = instrument;
  }

  std::vector<NoteEvent> events;
  for (const XmlElement* part : root.children_named("part")) {
    std::string id(part->attribute("id"));
    auto it = instruments.find(id);
    if (it == instruments.end()) {
      throw StructuralError("part '" + id + "' not declared in <part-list>");
    }
    read_part(*part, it->second, piece_id, events);
  }
  return events;
}

}  // namespace zipfian
