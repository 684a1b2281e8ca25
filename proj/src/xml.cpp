#include "wsqos/xml.hpp"

#include <cctype>
#include <sstream>

#include "wsqos/errors.hpp"

namespace wsqos::xml {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
           c == '-' || c == '.';
}

std::string trim(std::string_view s) {
    size_t begin = 0, end = s.size();
    while (begin < end && is_space(s[begin])) ++begin;
    while (end > begin && is_space(s[end - 1])) --end;
    return std::string(s.substr(begin, end - begin));
}

class Parser {
public:
    explicit Parser(std::string_view input) : input_(input) {}

    Element parse_document() {
        skip_prolog();
        Element root = parse_element();
        skip_misc();
        if (pos_ != input_.size()) fail("content after document root");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        raise(ErrorCode::MalformedXml,
              message + " at byte " + std::to_string(pos_));
    }

    bool eof() const { return pos_ >= input_.size(); }
    char peek() const { return input_[pos_]; }
    bool starts_with(std::string_view s) const {
        return input_.substr(pos_, s.size()) == s;
    }

    void skip_whitespace() {
        while (!eof() && is_space(peek())) ++pos_;
    }

    void skip_until(std::string_view terminator, const std::string& what) {
        size_t at = input_.find(terminator, pos_);
        if (at == std::string_view::npos) fail("unterminated " + what);
        pos_ = at + terminator.size();
    }

    // Whitespace, comments and PIs between markup.
    void skip_misc() {
        for (;;) {
            skip_whitespace();
            if (starts_with("<!--")) {
                pos_ += 4;
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                pos_ += 2;
                skip_until("?>", "processing instruction");
            } else {
                return;
            }
        }
    }

    void skip_prolog() {
        skip_misc();
        if (starts_with("<!DOCTYPE")) {
            skip_until(">", "DOCTYPE");
            skip_misc();
        }
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) fail("expected name");
        size_t begin = pos_;
        ++pos_;
        while (!eof() && is_name_char(peek())) ++pos_;
        return std::string(input_.substr(begin, pos_ - begin));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            size_t semi = raw.find(';', i + 1);
            if (semi == std::string_view::npos) fail("unterminated entity");
            std::string_view entity = raw.substr(i + 1, semi - i - 1);
            if (entity == "amp") out += '&';
            else if (entity == "lt") out += '<';
            else if (entity == "gt") out += '>';
            else if (entity == "quot") out += '"';
            else if (entity == "apos") out += '\'';
            else if (!entity.empty() && entity[0] == '#') {
                out += decode_char_ref(entity.substr(1));
            } else {
                fail("unknown entity '" + std::string(entity) + "'");
            }
            i = semi;
        }
        return out;
    }

    char decode_char_ref(std::string_view digits) {
        int base = 10;
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
            base = 16;
            digits.remove_prefix(1);
        }
        if (digits.empty()) fail("empty character reference");
        long value = 0;
        for (char c : digits) {
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else { fail("bad character reference"); }
            value = value * base + d;
            if (value > 0x10FFFF) fail("character reference out of range");
        }
        if (value == 0 || value > 127) fail("unsupported character reference");
        return static_cast<char>(value);
    }

    std::string parse_attribute_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) {
            fail("expected quoted attribute value");
        }
        char quote = peek();
        ++pos_;
        size_t begin = pos_;
        while (!eof() && peek() != quote) {
            if (peek() == '<') fail("'<' in attribute value");
            ++pos_;
        }
        if (eof()) fail("unterminated attribute value");
        std::string value = decode_entities(input_.substr(begin, pos_ - begin));
        ++pos_;
        return value;
    }

    Element parse_element() {
        if (eof() || peek() != '<') fail("expected element");
        ++pos_;
        Element element;
        element.name = parse_name();
        for (;;) {
            skip_whitespace();
            if (eof()) fail("unterminated start tag");
            if (peek() == '>') {
                ++pos_;
                parse_content(element);
                return element;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return element;
            }
            std::string attr_name = parse_name();
            for (const auto& [existing, _] : element.attributes) {
                if (existing == attr_name) {
                    fail("duplicate attribute '" + attr_name + "'");
                }
            }
            skip_whitespace();
            if (eof() || peek() != '=') fail("expected '=' after attribute name");
            ++pos_;
            skip_whitespace();
            element.attributes.emplace_back(attr_name, parse_attribute_value());
        }
    }

    void parse_content(Element& element) {
        std::string text;
        for (;;) {
            size_t chunk_begin = pos_;
            while (!eof() && peek() != '<') ++pos_;
            if (eof()) fail("unterminated element <" + element.name + ">");
            text += decode_entities(input_.substr(chunk_begin, pos_ - chunk_begin));
            if (starts_with("</")) {
                pos_ += 2;
                std::string close = parse_name();
                if (close != element.name) {
                    fail("mismatched close tag </" + close + "> for <" +
                         element.name + ">");
                }
                skip_whitespace();
                if (eof() || peek() != '>') fail("malformed close tag");
                ++pos_;
                break;
            }
            if (starts_with("<!--")) {
                pos_ += 4;
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                pos_ += 2;
                skip_until("?>", "processing instruction");
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                size_t end = input_.find("]]>", pos_);
                if (end == std::string_view::npos) fail("unterminated CDATA");
                text.append(input_.substr(pos_, end - pos_));
                pos_ = end + 3;
            } else {
                element.children.push_back(parse_element());
            }
        }
        std::string trimmed = trim(text);
        if (!element.children.empty()) {
            if (!trimmed.empty()) fail("mixed content in <" + element.name + ">");
        } else {
            element.text = std::move(trimmed);
        }
    }

    std::string_view input_;
    size_t pos_ = 0;
};

void write_element(std::ostringstream& out, const Element& element, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    out << indent << '<' << element.name;
    for (const auto& [name, value] : element.attributes) {
        out << ' ' << name << "=\"" << escape_attribute(value) << '"';
    }
    if (element.children.empty() && element.text.empty()) {
        out << "/>\n";
        return;
    }
    if (element.children.empty()) {
        out << '>' << escape_text(element.text) << "</" << element.name << ">\n";
        return;
    }
    out << ">\n";
    for (const Element& child : element.children) {
        write_element(out, child, depth + 1);
    }
    out << indent << "</" << element.name << ">\n";
}

}  // namespace

std::string_view local_name(std::string_view qualified) {
    size_t colon = qualified.rfind(':');
    return colon == std::string_view::npos ? qualified
                                           : qualified.substr(colon + 1);
}

const Element* Element::child(std::string_view name_arg) const {
    for (const Element& c : children) {
        if (local_name(c.name) == name_arg) return &c;
    }
    return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view name_arg) const {
    std::vector<const Element*> out;
    for (const Element& c : children) {
        if (local_name(c.name) == name_arg) out.push_back(&c);
    }
    return out;
}

std::optional<std::string> Element::attribute(std::string_view name_arg) const {
    for (const auto& [name, value] : attributes) {
        if (name == name_arg) return value;
    }
    return std::nullopt;
}

Element& Element::add_child(std::string child_name) {
    children.push_back(Element{});
    children.back().name = std::move(child_name);
    return children.back();
}

void Element::set_attribute(std::string attr_name, std::string value) {
    attributes.emplace_back(std::move(attr_name), std::move(value));
}

Element parse(std::string_view document) {
    return Parser(document).parse_document();
}

std::string write(const Element& root) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write_element(out, root, 0);
    return out.str();
}

std::string escape_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string escape_attribute(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\n': out += "&#10;"; break;
            case '\t': out += "&#9;"; break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace wsqos::xml
