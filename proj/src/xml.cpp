#include "zipfian/xml.hpp"

#include <cctype>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
         c == '.' || c == ':';
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  int line() const { return line_; }

  char next() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool starts_with(std::string_view prefix) const {
    return text_.substr(pos_, prefix.size()) == prefix;
  }

  void skip(size_t n) {
    for (size_t i = 0; i < n && !eof(); ++i) next();
  }

  /// Advances past `terminator`, returning the text before it.
  std::string_view until(std::string_view terminator) {
    size_t found = text_.find(terminator, pos_);
    if (found == std::string_view::npos) {
      throw ParseError("unexpected end of document, expected '" +
                           std::string(terminator) + "'",
                       line_);
    }
    std::string_view chunk = text_.substr(pos_, found - pos_);
    skip(chunk.size() + terminator.size());
    return chunk;
  }

  void skip_whitespace() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) next();
  }

  std::string read_name() {
    std::string name;
    while (!eof() && is_name_char(peek())) name += next();
    if (name.empty()) throw ParseError("expected XML name", line_);
    return name;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

std::string decode_entities(std::string_view raw, int line) {
  std::string out;
  out.reserve(raw.size());
  size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out += raw[i++];
      continue;
    }
    size_t semi = raw.find(';', i);
    if (semi == std::string_view::npos) throw ParseError("unterminated entity", line);
    std::string_view entity = raw.substr(i + 1, semi - i - 1);
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (!entity.empty() && entity[0] == '#') {
      int base = 10;
      std::string_view digits = entity.substr(1);
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.remove_prefix(1);
      }
      unsigned long code = 0;
      if (digits.empty()) throw ParseError("empty character reference", line);
      for (char c : digits) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else throw ParseError("bad character reference", line);
        code = code * base + static_cast<unsigned long>(digit);
      }
      // UTF-8 encode.
      if (code < 0x80) {
        out += static_cast<char>(code);
      } else if (code < 0x800) {
        out += static_cast<char>(0xC0 | (code >> 6));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else if (code < 0x10000) {
        out += static_cast<char>(0xE0 | (code >> 12));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (code >> 18));
        out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      }
    } else {
      throw ParseError("unknown entity '&" + std::string(entity) + ";'", line);
    }
    i = semi + 1;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : scan_(text) {}

  XmlElement parse_document() {
    skip_misc();
    if (scan_.eof() || scan_.peek() != '<') {
      throw ParseError("expected root element", scan_.line());
    }
    XmlElement root = parse_element();
    skip_misc();
    if (!scan_.eof()) throw ParseError("content after root element", scan_.line());
    return root;
  }

 private:
  // Skips whitespace, comments, PIs, the XML declaration and DOCTYPE.
  void skip_misc() {
    for (;;) {
      scan_.skip_whitespace();
      if (scan_.starts_with("<?")) {
        scan_.skip(2);
        scan_.until("?>");
      } else if (scan_.starts_with("<!--")) {
        scan_.skip(4);
        scan_.until("-->");
      } else if (scan_.starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_doctype() {
    scan_.skip(9);
    int depth = 0;
    while (!scan_.eof()) {
      char c = scan_.next();
      if (c == '"' || c == '\'') {
        char quote = c;
        while (!scan_.eof() && scan_.next() != quote) {
        }
      } else if (c == '[') {
        ++depth;
      } else if (c == ']') {
        --depth;
      } else if (c == '>' && depth == 0) {
        return;
      }
    }
    throw ParseError("unterminated DOCTYPE", scan_.line());
  }

  XmlElement parse_element() {
    int line = scan_.line();
    scan_.next();  // '<'
    XmlElement element;
    element.line = line;
    element.name = scan_.read_name();
    for (;;) {
      scan_.skip_whitespace();
      if (scan_.eof()) throw ParseError("unterminated tag <" + element.name + ">", line);
      if (scan_.peek() == '>') {
        scan_.next();
        parse_content(element);
        return element;
      }
      if (scan_.starts_with("/>")) {
        scan_.skip(2);
        return element;
      }
      // attribute
      int attr_line = scan_.line();
      std::string name = scan_.read_name();
      scan_.skip_whitespace();
      if (scan_.eof() || scan_.peek() != '=') {
        throw ParseError("expected '=' after attribute '" + name + "'", attr_line);
      }
      scan_.next();
      scan_.skip_whitespace();
      if (scan_.eof() || (scan_.peek() != '"' && scan_.peek() != '\'')) {
        throw ParseError("expected quoted attribute value", attr_line);
      }
      char quote = scan_.next();
      std::string raw;
      while (!scan_.eof() && scan_.peek() != quote) raw += scan_.next();
      if (scan_.eof()) throw ParseError("unterminated attribute value", attr_line);
      scan_.next();
      element.attributes.emplace_back(std::move(name),
                                      decode_entities(raw, attr_line));
    }
  }

  void parse_content(XmlElement& element) {
    std::string raw_text;
    int text_line = scan_.line();
    for (;;) {
      if (scan_.eof()) {
        throw ParseError("missing closing tag </" + element.name + ">", element.line);
      }
      if (scan_.peek() != '<') {
        raw_text += scan_.next();
        continue;
      }
      if (scan_.starts_with("</")) {
        scan_.skip(2);
        int close_line = scan_.line();
        std::string name = scan_.read_name();
        scan_.skip_whitespace();
        if (scan_.eof() || scan_.next() != '>') {
          throw ParseError("malformed closing tag", close_line);
        }
        if (name != element.name) {
          throw ParseError("closing tag </" + name + "> does not match <" +
                               element.name + ">",
                           close_line);
        }
        element.text = decode_entities(raw_text, text_line);
        return;
      }
      if (scan_.starts_with("<!--")) {
        scan_.skip(4);
        scan_.until("-->");
      } else if (scan_.starts_with("<![CDATA[")) {
        scan_.skip(9);
        raw_text += scan_.until("]]>");
      } else if (scan_.starts_with("<?")) {
        scan_.skip(2);
        scan_.until("?>");
      } else {
        element.children.push_back(parse_element());
      }
    }
  }

  Scanner scan_;
};

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

const XmlElement* XmlElement::child(std::string_view child_name) const {
  for (const XmlElement& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const XmlElement*> XmlElement::children_named(std::string_view child_name) const {
  std::vector<const XmlElement*> out;
  for (const XmlElement& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

std::string_view XmlElement::attribute(std::string_view attr_name) const {
  for (const auto& [key, value] : attributes) {
    if (key == attr_name) return value;
  }
  return {};
}

std::string_view XmlElement::required_text(std::string_view child_name) const {
  const XmlElement* c = child(child_name);
  if (c == nullptr) {
    throw StructuralError("<" + name + "> is missing <" + std::string(child_name) +
                          "> (line " + std::to_string(line) + ")");
  }
  return trim(c->text);
}

XmlElement parse_xml(std::string_view document) {
  return Parser(document).parse_document();
}

}  // namespace zipfian
