#include "abelgen/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "abelgen/common.hpp"

namespace abelgen {

namespace {

using nlohmann::json;

class TomlParser {
 public:
  explicit TomlParser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    for (;;) {
      skip_ws(true);
      if (eof()) break;
      if (peek() == '[') {
        table = parse_header(root);
      } else {
        parse_keyval(*table);
        expect_line_end();
      }
    }
    return root;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void err(const std::string& what) {
    fail(errc::parse_error, "toml line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws(bool newlines) {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        get();
      } else if (c == '\n' && newlines) {
        get();
      } else {
        break;
      }
    }
  }

  void expect_line_end() {
    skip_ws(false);
    if (eof()) return;
    if (peek() != '\n') err("unexpected trailing content");
    get();
  }

  std::string parse_key() {
    skip_ws(false);
    if (eof()) err("expected a key");
    if (peek() == '"') return parse_basic_string();
    std::string out;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        out.push_back(get());
      } else {
        break;
      }
    }
    if (out.empty()) err("expected a key");
    return out;
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path;
    path.push_back(parse_key());
    skip_ws(false);
    while (!eof() && peek() == '.') {
      get();
      path.push_back(parse_key());
      skip_ws(false);
    }
    return path;
  }

  json* descend(json& root, const std::vector<std::string>& path, bool array_of_tables) {
    json* cur = &root;
    for (size_t i = 0; i < path.size(); ++i) {
      bool last = i + 1 == path.size();
      const std::string& key = path[i];
      if (last && array_of_tables) {
        if (!cur->contains(key)) (*cur)[key] = json::array();
        json& arr = (*cur)[key];
        if (!arr.is_array()) err("redefinition of '" + key + "' as array of tables");
        arr.push_back(json::object());
        return &arr.back();
      }
      if (!cur->contains(key)) (*cur)[key] = json::object();
      json& next = (*cur)[key];
      if (next.is_array()) {
        if (next.empty()) err("empty table array '" + key + "'");
        cur = &next.back();
      } else if (next.is_object()) {
        cur = &next;
      } else {
        err("key '" + key + "' is not a table");
      }
    }
    return cur;
  }

  json* parse_header(json& root) {
    get();  // '['
    bool array_of_tables = !eof() && peek() == '[';
    if (array_of_tables) get();
    std::vector<std::string> path = parse_key_path();
    skip_ws(false);
    if (eof() || get() != ']') err("expected ']'");
    if (array_of_tables) {
      if (eof() || get() != ']') err("expected ']]'");
    }
    expect_line_end();
    return descend(root, path, array_of_tables);
  }

  void parse_keyval(json& table) {
    std::vector<std::string> path = parse_key_path();
    skip_ws(false);
    if (eof() || get() != '=') err("expected '='");
    skip_ws(false);
    json value = parse_value();
    json* cur = &table;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      if (!cur->contains(path[i])) (*cur)[path[i]] = json::object();
      cur = &(*cur)[path[i]];
      if (!cur->is_object()) err("dotted key through a non-table");
    }
    if (cur->contains(path.back())) err("duplicate key '" + path.back() + "'");
    (*cur)[path.back()] = std::move(value);
  }

  json parse_value() {
    skip_ws(false);
    if (eof()) err("expected a value");
    char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (c == 't' || c == 'f') return parse_bool();
    return parse_number();
  }

  std::string parse_basic_string() {
    if (get() != '"') err("expected '\"'");
    std::string out;
    for (;;) {
      if (eof()) err("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\n') err("newline in string");
      if (c == '\\') {
        if (eof()) err("unterminated escape");
        char e = get();
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default: err("unsupported escape sequence");
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  json parse_bool() {
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    err("expected a boolean");
  }

  json parse_number() {
    size_t start = pos_;
    bool is_float = false;
    if (!eof() && (peek() == '+' || peek() == '-')) get();
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        get();
      } else if (c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-') {
        // '+'/'-' only valid right after an exponent marker; accept and let
        // strtod sort it out.
        is_float = is_float || c == '.' || c == 'e' || c == 'E';
        get();
      } else {
        break;
      }
    }
    std::string tok = s_.substr(start, pos_ - start);
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    if (tok.empty()) err("expected a number");
    if (is_float) {
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) err("malformed float '" + tok + "'");
      return v;
    }
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size()) err("malformed integer '" + tok + "'");
    return static_cast<int64_t>(v);
  }

  json parse_array() {
    get();  // '['
    json arr = json::array();
    for (;;) {
      skip_ws(true);
      if (eof()) err("unterminated array");
      if (peek() == ']') {
        get();
        break;
      }
      arr.push_back(parse_value());
      skip_ws(true);
      if (eof()) err("unterminated array");
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        err("expected ',' or ']' in array");
      }
    }
    return arr;
  }

  json parse_inline_table() {
    get();  // '{'
    json obj = json::object();
    skip_ws(false);
    if (!eof() && peek() == '}') {
      get();
      return obj;
    }
    for (;;) {
      std::string key = parse_key();
      skip_ws(false);
      if (eof() || get() != '=') err("expected '=' in inline table");
      obj[key] = parse_value();
      skip_ws(false);
      if (eof()) err("unterminated inline table");
      char c = get();
      if (c == '}') break;
      if (c != ',') err("expected ',' or '}' in inline table");
      skip_ws(false);
    }
    return obj;
  }
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return TomlParser(text).parse(); }

nlohmann::json load_document(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(errc::parse_error, std::string("json: ") + e.what());
    }
  }
  return parse_toml(text);
}

}  // namespace abelgen
