#include "curvatura/surface_file.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace curvatura {
namespace {

struct Value {
  enum class Kind { String, Number, Array } kind;
  std::string text;                  // String
  double number = 0.0;               // Number
  std::vector<Value> items;          // Array
};

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// removes a trailing comment that is not inside a string
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Value parse_value(const std::string& raw, int line_no) {
  const std::string text = strip(raw);
  if (text.empty())
    throw ParseError("missing value", static_cast<std::size_t>(line_no));
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"')
      throw ParseError("unterminated string", static_cast<std::size_t>(line_no));
    return {Value::Kind::String, text.substr(1, text.size() - 2), 0.0, {}};
  }
  if (text.front() == '[') {
    if (text.back() != ']')
      throw ParseError("unterminated array", static_cast<std::size_t>(line_no));
    Value out{Value::Kind::Array, "", 0.0, {}};
    std::string body = text.substr(1, text.size() - 2);
    std::string item;
    bool in_string = false;
    for (const char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!strip(item).empty()) out.items.push_back(parse_value(item, line_no));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!strip(item).empty()) out.items.push_back(parse_value(item, line_no));
    return out;
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw ParseError("malformed value '" + text + "'",
                     static_cast<std::size_t>(line_no));
  return {Value::Kind::Number, "", v, {}};
}

}  // namespace

SurfaceFile parse_surface_file(const std::string& text,
                               const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;

  std::string name = origin;
  std::optional<int> ambient_dim;
  std::vector<std::string> components;
  AnalysisDefaults analysis;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ParseError("malformed section header",
                         static_cast<std::size_t>(line_no));
      section = strip(body.substr(1, body.size() - 2));
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", static_cast<std::size_t>(line_no));
    const std::string key = strip(body.substr(0, eq));
    const Value value = parse_value(body.substr(eq + 1), line_no);

    if (section == "surface") {
      if (key == "name" && value.kind == Value::Kind::String) {
        name = value.text;
      } else if (key == "ambient_dim" && value.kind == Value::Kind::Number) {
        ambient_dim = static_cast<int>(value.number);
      } else if (key == "components" && value.kind == Value::Kind::Array) {
        for (const auto& item : value.items) {
          if (item.kind != Value::Kind::String)
            throw ParseError("components must be strings",
                             static_cast<std::size_t>(line_no));
          components.push_back(item.text);
        }
      } else {
        throw ParseError("unknown [surface] key '" + key + "'",
                         static_cast<std::size_t>(line_no));
      }
    } else if (section == "analysis") {
      auto num = [&](std::optional<double>& slot) {
        if (value.kind != Value::Kind::Number)
          throw ParseError("expected number for '" + key + "'",
                           static_cast<std::size_t>(line_no));
        slot = value.number;
      };
      if (key == "s_range" || key == "t_range") {
        if (value.kind != Value::Kind::Array || value.items.size() != 2)
          throw ParseError(key + " must be a 2-element array",
                           static_cast<std::size_t>(line_no));
        if (key == "s_range") {
          analysis.s_min = value.items[0].number;
          analysis.s_max = value.items[1].number;
        } else {
          analysis.t_min = value.items[0].number;
          analysis.t_max = value.items[1].number;
        }
      } else if (key == "at") {
        if (value.kind != Value::Kind::Array || value.items.size() != 2)
          throw ParseError("at must be a 2-element array",
                           static_cast<std::size_t>(line_no));
        analysis.at_s = value.items[0].number;
        analysis.at_t = value.items[1].number;
      } else if (key == "resolution") {
        if (value.kind != Value::Kind::Number)
          throw ParseError("resolution must be a number",
                           static_cast<std::size_t>(line_no));
        analysis.resolution = static_cast<int>(value.number);
      } else if (key == "samples") {
        if (value.kind != Value::Kind::Number)
          throw ParseError("samples must be a number",
                           static_cast<std::size_t>(line_no));
        analysis.samples = static_cast<int>(value.number);
      } else if (key == "seed") {
        if (value.kind != Value::Kind::Number)
          throw ParseError("seed must be a number",
                           static_cast<std::size_t>(line_no));
        analysis.seed = static_cast<std::uint64_t>(value.number);
      } else if (key == "tol") {
        std::optional<double> slot;
        num(slot);
        analysis.tol = slot;
      } else {
        throw ParseError("unknown [analysis] key '" + key + "'",
                         static_cast<std::size_t>(line_no));
      }
    } else {
      throw ParseError("keys must appear inside [surface] or [analysis]",
                       static_cast<std::size_t>(line_no));
    }
  }

  if (!ambient_dim)
    throw ParseError("[surface] ambient_dim missing", 0);
  if (components.empty())
    throw ParseError("[surface] components missing", 0);

  SurfaceFile file;
  file.spec = parse_surface(*ambient_dim, components, name);
  file.analysis = analysis;
  return file;
}

SurfaceFile load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open surface file '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_surface_file(buf.str(), path);
}

}  // namespace curvatura
