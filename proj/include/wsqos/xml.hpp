#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsqos::xml {

// Minimal XML document model: elements, ordered attributes and character
// data. Comments, processing instructions and DOCTYPE are skipped on parse.
// Mixed content is not modeled; character data of an element with children
// is discarded if it is pure whitespace and rejected otherwise.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;  // trimmed character data (childless elements only)

    const Element* child(std::string_view local_name) const;
    std::vector<const Element*> children_named(std::string_view local_name) const;
    std::optional<std::string> attribute(std::string_view name) const;
    Element& add_child(std::string child_name);
    void set_attribute(std::string attr_name, std::string value);

    bool operator==(const Element&) const = default;
};

// Returns the part of a qualified name after the last ':'.
std::string_view local_name(std::string_view qualified);

// Parses a single-rooted document. Throws Error{MalformedXml} with a byte
// offset on syntax errors.
Element parse(std::string_view document);

// Serializes with a UTF-8 declaration, two-space indentation and a trailing
// newline. parse(write(e)) reproduces e for any tree this module can model.
std::string write(const Element& root);

std::string escape_text(std::string_view raw);
std::string escape_attribute(std::string_view raw);

}  // namespace wsqos::xml
