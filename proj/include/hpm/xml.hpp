#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hpm/errors.hpp"

// Minimal XML document model: enough for the data dialects this toolchain
// emits and consumes. Element content is either text or child elements,
// never mixed. Namespace prefixes are resolved at parse time.
namespace hpm::xml {

struct Element {
  std::string name;   // qualified name as written, e.g. "hpm:holon"
  std::string ns;     // resolved namespace URI, empty if none
  std::string local;  // local part of the name
  std::vector<std::pair<std::string, std::string>> attrs;  // document order
  std::vector<Element> children;
  std::string text;  // leaf text content

  Element() = default;
  Element(std::string ns_uri, std::string qname) : name(std::move(qname)), ns(std::move(ns_uri)) {
    auto colon = name.find(':');
    local = colon == std::string::npos ? name : name.substr(colon + 1);
  }

  std::optional<std::string_view> attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return std::string_view(v);
    return std::nullopt;
  }
  Element& set(std::string key, std::string value) {
    attrs.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Element& add_child(Element child) {
    children.push_back(std::move(child));
    return children.back();
  }
  const Element* child(std::string_view local_name) const {
    for (const Element& c : children)
      if (c.local == local_name) return &c;
    return nullptr;
  }
  std::vector<const Element*> children_named(std::string_view local_name) const {
    std::vector<const Element*> out;
    for (const Element& c : children)
      if (c.local == local_name) out.push_back(&c);
    return out;
  }
  std::string child_text(std::string_view local_name) const {
    const Element* c = child(local_name);
    return c ? c->text : std::string();
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  Element run() {
    skip_bom();
    skip_prolog_misc(true);
    if (eof() || peek() != '<') error("expected root element");
    Element root = element({});
    skip_prolog_misc(false);
    if (!eof()) error("content after the root element");
    return root;
  }

 private:
  using Bindings = std::map<std::string, std::string>;  // prefix -> uri, "" = default

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  [[noreturn]] void error(const std::string& message) const {
    fail(Errc::xml_syntax, "",
         "line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": " + message);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }
  char take() {
    if (eof()) error("unexpected end of input");
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  bool consume(std::string_view token) {
    if (in_.substr(pos_).substr(0, token.size()) != token) return false;
    for (std::size_t i = 0; i < token.size(); ++i) take();
    return true;
  }
  void expect(std::string_view token, const char* what) {
    if (!consume(token)) error(std::string("expected ") + what);
  }
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  void skip_space() {
    while (!eof() && is_space(peek())) take();
  }

  void skip_bom() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  void skip_prolog_misc(bool allow_decl) {
    bool decl_seen = false;
    for (;;) {
      skip_space();
      if (consume("<?xml")) {
        if (!allow_decl || decl_seen) error("misplaced XML declaration");
        decl_seen = true;
        xml_declaration();
        continue;
      }
      if (peek() == '<' && peek(1) == '?') {
        skip_processing_instruction();
        continue;
      }
      if (peek() == '<' && peek(1) == '!' && peek(2) == '-') {
        skip_comment();
        continue;
      }
      if (peek() == '<' && peek(1) == '!') error("DOCTYPE is not supported");
      return;
    }
  }

  void xml_declaration() {
    std::size_t end = in_.find("?>", pos_);
    if (end == std::string_view::npos) error("unterminated XML declaration");
    std::string decl(in_.substr(pos_, end - pos_));
    for (char& c : decl) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    if (decl.find("encoding") != std::string::npos &&
        decl.find("utf-8") == std::string::npos)
      error("only UTF-8 documents are supported");
    while (pos_ < end) take();
    consume("?>");
  }

  void skip_processing_instruction() {
    expect("<?", "processing instruction");
    while (!eof() && !(peek() == '?' && peek(1) == '>')) take();
    expect("?>", "'?>'");
  }

  void skip_comment() {
    expect("<!--", "comment");
    while (!eof() && !(peek() == '-' && peek(1) == '-' && peek(2) == '>')) take();
    expect("-->", "'-->'");
  }

  static bool name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  }
  static bool name_char(char c) {
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == ':';
  }

  std::string name() {
    if (eof() || !name_start(peek())) error("expected a name");
    std::string out;
    while (!eof() && name_char(peek())) out += take();
    return out;
  }

  std::string attribute_value() {
    char quote = take();
    if (quote != '"' && quote != '\'') error("attribute value must be quoted");
    std::string out;
    for (;;) {
      if (eof()) error("unterminated attribute value");
      char c = peek();
      if (c == quote) {
        take();
        return out;
      }
      if (c == '<') error("'<' in attribute value");
      if (c == '&') {
        out += entity();
      } else {
        out += take();
      }
    }
  }

  std::string entity() {
    expect("&", "entity");
    std::string body;
    while (!eof() && peek() != ';') {
      body += take();
      if (body.size() > 10) error("malformed entity reference");
    }
    expect(";", "';' ending an entity");
    if (body == "amp") return "&";
    if (body == "lt") return "<";
    if (body == "gt") return ">";
    if (body == "quot") return "\"";
    if (body == "apos") return "'";
    if (!body.empty() && body[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = body.size() > 1;
      if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
        for (std::size_t i = 2; i < body.size(); ++i) {
          char c = body[i];
          std::uint32_t d;
          if (c >= '0' && c <= '9') d = c - '0';
          else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
          else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
          else { ok = false; break; }
          cp = cp * 16 + d;
        }
      } else {
        for (std::size_t i = 1; i < body.size(); ++i) {
          char c = body[i];
          if (c < '0' || c > '9') { ok = false; break; }
          cp = cp * 10 + (c - '0');
        }
      }
      if (!ok || cp == 0 || cp > 0x10FFFF) error("malformed character reference");
      return encode_utf8(cp);
    }
    error("unknown entity '&" + body + ";'");
  }

  static std::string encode_utf8(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
  }

  void resolve(Element& e, const Bindings& scope) const {
    auto colon = e.name.find(':');
    std::string prefix = colon == std::string::npos ? "" : e.name.substr(0, colon);
    e.local = colon == std::string::npos ? e.name : e.name.substr(colon + 1);
    if (e.local.empty() || e.local.find(':') != std::string::npos)
      fail(Errc::xml_syntax, "",
           "line " + std::to_string(line_) + ": malformed qualified name '" + e.name + "'");
    auto it = scope.find(prefix);
    if (it == scope.end()) {
      if (prefix.empty()) {
        e.ns.clear();
        return;
      }
      fail(Errc::unknown_namespace, e.name, "unbound namespace prefix '" + prefix + "'");
    }
    e.ns = it->second;
  }

  Element element(Bindings scope) {
    expect("<", "'<'");
    Element e;
    e.name = name();
    // Attributes, collecting namespace declarations first.
    for (;;) {
      skip_space();
      if (consume("/>")) {
        apply_bindings(e, scope);
        resolve(e, scope);
        return e;
      }
      if (consume(">")) break;
      std::string key = name();
      skip_space();
      expect("=", "'=' after attribute name");
      skip_space();
      std::string value = attribute_value();
      for (const auto& [k, v] : e.attrs)
        if (k == key) error("duplicate attribute '" + key + "'");
      e.attrs.emplace_back(std::move(key), std::move(value));
    }
    apply_bindings(e, scope);
    resolve(e, scope);
    content(e, scope);
    expect("</", "closing tag");
    std::string closing = name();
    if (closing != e.name) error("mismatched closing tag '" + closing + "' for '" + e.name + "'");
    skip_space();
    expect(">", "'>' ending the closing tag");
    return e;
  }

  void apply_bindings(const Element& e, Bindings& scope) const {
    for (const auto& [k, v] : e.attrs) {
      if (k == "xmlns") scope[""] = v;
      else if (k.rfind("xmlns:", 0) == 0) scope[k.substr(6)] = v;
    }
  }

  void content(Element& e, const Bindings& scope) {
    std::string text;
    bool has_elements = false;
    for (;;) {
      if (eof()) error("unterminated element '" + e.name + "'");
      char c = peek();
      if (c == '<') {
        if (peek(1) == '/') break;
        if (peek(1) == '!' && peek(2) == '-') {
          skip_comment();
          continue;
        }
        if (consume("<![CDATA[")) {
          std::size_t end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) error("unterminated CDATA section");
          while (pos_ < end) text += take();
          consume("]]>");
          continue;
        }
        if (peek(1) == '?') {
          skip_processing_instruction();
          continue;
        }
        e.children.push_back(element(scope));
        has_elements = true;
        continue;
      }
      if (c == '&') {
        text += entity();
      } else {
        text += take();
      }
    }
    if (has_elements) {
      // Only whitespace may separate sibling elements.
      for (char c : text)
        if (!is_space(c))
          fail(Errc::schema_violation, e.name, "mixed element and text content");
    } else {
      e.text = std::move(text);
    }
  }
};

inline void escape_text(const std::string& in, std::string& out) {
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

inline void escape_attr(const std::string& in, std::string& out) {
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
}

inline void write_element(const Element& e, std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += e.name;
  auto attrs = e.attrs;
  std::sort(attrs.begin(), attrs.end());
  for (const auto& [k, v] : attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_attr(v, out);
    out += '"';
  }
  if (e.children.empty() && e.text.empty()) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (e.children.empty()) {
    escape_text(e.text, out);
  } else {
    out += '\n';
    for (const Element& c : e.children) write_element(c, out, depth + 1);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
  }
  out += "</";
  out += e.name;
  out += ">\n";
}

}  // namespace detail

// Parses a UTF-8 XML document. Throws Error with code xml_syntax,
// unknown_namespace, or schema_violation (mixed content).
inline Element parse(std::string_view input) { return detail::Parser(input).run(); }

// Canonical serialization: two-space indentation, attributes sorted by name,
// '\n' line ends, trailing newline. A pure function of the element tree.
inline std::string write(const Element& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  detail::write_element(root, out, 0);
  return out;
}

}  // namespace hpm::xml
