#include <doctest.h>

#include <algorithm>
#include <random>

#include "zipfian/errors.hpp"
#include "zipfian/io_util.hpp"
#include "zipfian/musicxml.hpp"
#include "zipfian/normalize.hpp"
#include "zipfian/units.hpp"
#include "zipfian/xml.hpp"
#include "zipfian/yulmyeong.hpp"

using namespace zipfian;

namespace {

std::string fixture(const char* name) {
  return read_file(std::string(ZIPFIAN_FIXTURES_DIR) + "/" + name);
}

std::string wrap_score(const std::string& measures, const char* part_name = "Piri") {
  return std::string("<score-partwise><part-list><score-part id=\"P1\">"
                     "<part-name>") +
         part_name + "</part-name></score-part></part-list><part id=\"P1\">" + measures +
         "</part></score-partwise>";
}

}  // namespace

TEST_CASE("rational arithmetic stays exact and reduced") {
  Rational r(18, 12);
  CHECK(r.num() == 3);
  CHECK(r.den() == 2);
  CHECK(r.str() == "3/2");
  CHECK((Rational(1, 12) * Rational(3, 2)).str() == "1/8");
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK(Rational::parse("3/2") == Rational(3, 2));
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational(2, -4).str() == "-1/2");
  CHECK_THROWS_AS(Rational(1, 0), DataError);
  CHECK_THROWS_AS(Rational::parse("x/2"), DataError);
}

TEST_CASE("pitch formatting, parsing, and midi arithmetic") {
  Pitch eb4 = make_pitch('E', -1, 4);
  CHECK(eb4.str() == "Eb4");
  CHECK(parse_pitch("Eb4") == eb4);
  CHECK(parse_pitch("F##2").alter == 2);
  CHECK(eb4.midi() == 63);
  CHECK(pitch_from_midi_flat(63) == eb4);
  CHECK(pitch_from_midi_flat(65).str() == "F4");
  CHECK(parse_pitch("D#4") != eb4);  // no enharmonic folding
  CHECK_THROWS_AS(parse_pitch("H4"), DataError);
  CHECK_THROWS_AS(parse_pitch("Eb"), DataError);
  CHECK_THROWS_AS(make_pitch('E', -3, 4), DataError);
  CHECK_THROWS_AS(make_pitch('E', 0, 12), DataError);
}

TEST_CASE("xml parser reports line positions on malformed input") {
  CHECK_THROWS_WITH_AS(parse_xml("<a>\n<b>\n</a>"),
                       doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_AS(parse_xml("<a><b></b>"), ParseError);
  CHECK_THROWS_AS(parse_xml("text only"), ParseError);

  XmlElement root = parse_xml(
      "<?xml version=\"1.0\"?><!DOCTYPE x [<!ENTITY y \"z\">]>\n"
      "<a one=\"1\"><!-- skip --><b>first</b><b>T&amp;B</b><c/></a>");
  CHECK(root.name == "a");
  CHECK(root.attribute("one") == "1");
  CHECK(root.children_named("b").size() == 2);
  CHECK(root.children_named("b")[1]->text == "T&B");
  CHECK(root.child("c") != nullptr);
  CHECK(root.child("missing") == nullptr);
}

TEST_CASE("note duration is ticks over divisions, exactly") {
  std::string doc = wrap_score(
      "<measure number=\"1\"><attributes><divisions>12</divisions></attributes>"
      "<note><pitch><step>E</step><alter>-1</alter><octave>4</octave></pitch>"
      "<duration>18</duration></note></measure>");
  auto events = parse_musicxml(doc, "t");
  REQUIRE(events.size() == 1);
  CHECK(events[0].pitch.str() == "Eb4");
  CHECK(events[0].duration == Rational(3, 2));
  CHECK(events[0].instrument == Instrument::Piri);
  CHECK(events[0].piece_id == "t");
}

TEST_CASE("rests are excluded") {
  std::string doc = wrap_score(
      "<measure number=\"1\"><attributes><divisions>4</divisions></attributes>"
      "<note><rest/><duration>4</duration></note>"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>4</duration></note>"
      "</measure>");
  auto events = parse_musicxml(doc, "t");
  REQUIRE(events.size() == 1);
  CHECK(events[0].pitch.str() == "F4");
}

TEST_CASE("structural errors name the measure") {
  std::string missing_duration = wrap_score(
      "<measure number=\"7\"><attributes><divisions>4</divisions></attributes>"
      "<note><pitch><step>F</step><octave>4</octave></pitch></note></measure>");
  CHECK_THROWS_WITH_AS(parse_musicxml(missing_duration, "t"),
                       doctest::Contains("measure 7"), StructuralError);

  std::string no_divisions = wrap_score(
      "<measure number=\"1\">"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>4</duration></note>"
      "</measure>");
  CHECK_THROWS_WITH_AS(parse_musicxml(no_divisions, "t"),
                       doctest::Contains("divisions"), StructuralError);

  CHECK_THROWS_AS(parse_musicxml(wrap_score("", "Theremin"), "t"), StructuralError);
  CHECK_THROWS_AS(parse_musicxml("<score-timewise></score-timewise>", "t"),
                  StructuralError);
}

TEST_CASE("tied notes merge into one event with summed duration") {
  std::string doc = wrap_score(
      "<measure number=\"1\"><attributes><divisions>4</divisions></attributes>"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>4</duration>"
      "<tie type=\"start\"/></note></measure>"
      "<measure number=\"2\">"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>2</duration>"
      "<tie type=\"stop\"/><tie type=\"start\"/></note>"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>1</duration>"
      "<tie type=\"stop\"/></note>"
      "<note><pitch><step>G</step><octave>4</octave></pitch><duration>4</duration></note>"
      "</measure>");
  auto events = parse_musicxml(doc, "t");
  REQUIRE(events.size() == 2);
  CHECK(events[0].duration == Rational(7, 4));  // 1 + 1/2 + 1/4 chained
  CHECK(events[1].pitch.str() == "G4");
}

TEST_CASE("golden fixture: chord expansion, rests, grace notes") {
  auto events = parse_musicxml(fixture("mini_piece.musicxml"));
  CHECK(events.size() == 9);
  CHECK(events_to_csv(events) == fixture("mini_piece.events.csv"));
}

TEST_CASE("event csv round-trips exactly") {
  auto events = parse_musicxml(fixture("mini_piece.musicxml"));
  std::string csv = events_to_csv(events);
  auto back = events_from_csv(csv);
  CHECK(back == events);
  CHECK(events_to_csv(back) == csv);

  // quoting survives commas in piece ids
  std::vector<NoteEvent> weird = {
      {parse_pitch("Eb4"), Rational(1, 3), Instrument::Voice, "a, \"b\""}};
  CHECK(events_from_csv(events_to_csv(weird)) == weird);
}

TEST_CASE("parsing is deterministic") {
  std::string doc = fixture("mini_piece.musicxml");
  CHECK(parse_musicxml(doc) == parse_musicxml(doc));
}

TEST_CASE("yulmyeong mapping follows the keynote") {
  YulmyeongTable table = YulmyeongTable::standard();
  table.validate();
  CHECK(yulmyeong_to_pitch("黃", table).str() == "Eb4");  // Hwang
  CHECK(yulmyeong_to_pitch("太", table).str() == "F4");   // Tae
  CHECK(yulmyeong_to_pitch("氵黃", table).str() == "Eb5");
  CHECK(yulmyeong_to_pitch("亻黃", table).str() == "Eb3");
  CHECK(yulmyeong_to_pitch("林", table).str() == "Bb4");  // Im, offset 7
  CHECK_THROWS_WITH_AS(yulmyeong_to_pitch("?", table), doctest::Contains("?"),
                       MappingError);
}

TEST_CASE("yulmyeong table loads from config json") {
  YulmyeongTable from_file = YulmyeongTable::from_json(fixture("yulmyeong_default.json"));
  YulmyeongTable standard = YulmyeongTable::standard();
  CHECK(from_file.keynote == standard.keynote);
  CHECK(from_file.mapping == standard.mapping);
  CHECK(from_file.octave_markers == standard.octave_markers);

  YulmyeongTable reparsed = YulmyeongTable::from_json(standard.to_json());
  CHECK(reparsed.mapping == standard.mapping);

  CHECK_THROWS_AS(YulmyeongTable::from_json("{\"mapping\": {\"x\": 0}}"), DataError);
  // twelve symbols but a duplicate offset
  YulmyeongTable bad = standard;
  bad.mapping["太"] = 1;
  CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("normalization applies octave shifts and piece scaling") {
  NormalizationPolicy policy = NormalizationPolicy::standard();
  policy.duration_scale["half"] = Rational(1, 2);

  std::vector<NoteEvent> events = {
      {parse_pitch("Eb5"), Rational(3, 2), Instrument::Daegeum, "p"},
      {parse_pitch("F4"), Rational(1), Instrument::Piri, "p"},
      {parse_pitch("Bb3"), Rational(3), Instrument::Geomungo, "half"},
  };
  auto out = normalize_events(events, policy);
  REQUIRE(out.size() == 3);
  CHECK(out[0].pitch.str() == "Eb4");
  CHECK(out[0].duration == Rational(3, 2));
  CHECK(out[1].pitch.str() == "F4");
  CHECK(out[1].duration == Rational(1));
  CHECK(out[2].pitch.str() == "Bb4");
  CHECK(out[2].duration == Rational(3, 2));
}

TEST_CASE("octave shift pairs invert exactly") {
  std::mt19937 rng(7);
  std::vector<NoteEvent> events;
  for (int i = 0; i < 50; ++i) {
    events.push_back({pitch_from_midi_flat(36 + static_cast<int>(rng() % 48)),
                      Rational(1 + static_cast<int>(rng() % 12), 12), Instrument::Piri,
                      "p"});
  }
  NormalizationPolicy up;
  up.octave_shift[Instrument::Piri] = 2;
  NormalizationPolicy down;
  down.octave_shift[Instrument::Piri] = -2;
  auto round_trip = normalize_events(normalize_events(events, up), down);
  CHECK(round_trip == events);
}

TEST_CASE("normalization rejects shifts that leave the octave range") {
  NormalizationPolicy policy;
  policy.octave_shift[Instrument::Piri] = -5;
  std::vector<NoteEvent> events = {
      {parse_pitch("C4"), Rational(1), Instrument::Piri, "p"}};
  CHECK_THROWS_AS(normalize_events(events, policy), DataError);
}

TEST_CASE("policy json accepts fraction strings and halves") {
  NormalizationPolicy policy = NormalizationPolicy::from_json(fixture("policy.json"));
  CHECK(policy.scale_for("mini_piece") == Rational(3, 2));
  CHECK(policy.scale_for("taryeong_bit") == Rational(1, 2));
  CHECK(policy.scale_for("unlisted") == Rational(1));
  CHECK(policy.shift_for(Instrument::Daegeum) == -1);

  auto numeric = NormalizationPolicy::from_json(
      "{\"duration_scale\": {\"a\": 0.5, \"b\": 1.5, \"c\": 1}}");
  CHECK(numeric.scale_for("a") == Rational(1, 2));
  CHECK(numeric.scale_for("b") == Rational(3, 2));
  CHECK(numeric.scale_for("c") == Rational(1));
  CHECK_THROWS_AS(NormalizationPolicy::from_json("{\"duration_scale\": {\"a\": 0.3}}"),
                  DataError);
}

TEST_CASE("build_units projects events and conserves count") {
  std::vector<NoteEvent> events = {
      {parse_pitch("Eb4"), Rational(3, 2), Instrument::Piri, "p"},
      {parse_pitch("Eb4"), Rational(3, 2), Instrument::Piri, "p"},
  };
  auto pairs = build_units(events, UnitKind::Pair);
  REQUIRE(pairs.size() == events.size());
  CHECK(pairs[0].str() == "Eb4|3/2");
  CHECK(pairs[0] == pairs[1]);
  auto pitches = build_units(events, UnitKind::Pitch);
  CHECK(pitches[0].str() == "Eb4");
  auto durations = build_units(events, UnitKind::Duration);
  CHECK(durations[0].str() == "3/2");
  CHECK(durations.size() == events.size());

  CHECK(ZipfianUnit::parse("Eb4|3/2") == pairs[0]);
  CHECK(ZipfianUnit::parse("3").str() == "3");
}

TEST_CASE("atomic write replaces the target only as a whole") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "zipfian_io_test";
  fs::create_directories(dir);
  fs::path target = dir / "out.csv";
  atomic_write_file(target, "hello\n");
  CHECK(read_file(target) == "hello\n");
  atomic_write_file(target, "replaced\n");
  CHECK(read_file(target) == "replaced\n");
  CHECK(!fs::exists(dir / "out.csv.tmp"));
  fs::remove_all(dir);
}
