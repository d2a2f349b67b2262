// Minimal XML document model, sufficient for the MusicXML subset.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace zipfian {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::string text;  // concatenated character data of this element
  int line = 0;      // 1-based line of the opening tag

  /// First child with the given name, or nullptr.
  const XmlElement* child(std::string_view child_name) const;

  /// All children with the given name.
  std::vector<const XmlElement*> children_named(std::string_view child_name) const;

  /// Attribute value, or empty view when absent.
  std::string_view attribute(std::string_view attr_name) const;

  bool has_child(std::string_view child_name) const { return child(child_name) != nullptr; }

  /// Trimmed text content. Throws StructuralError when the child is missing.
  std::string_view required_text(std::string_view child_name) const;
};

/// Parses a complete document into its root element. Handles declarations,
/// processing instructions, comments, DOCTYPE, CDATA and the five standard
/// entities plus numeric character references. Throws ParseError with the
/// line position on malformed input.
XmlElement parse_xml(std::string_view document);

}  // namespace zipfian
