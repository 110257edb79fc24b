#include "json_canon.hpp"

#include <cmath>
#include <cstdio>

namespace polarcone_cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write(const nlohmann::ordered_json& node, std::string& out, int depth) {
  const std::string indent(2 * static_cast<std::size_t>(depth), ' ');
  const std::string inner(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (node.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : node.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        escape_string(key, out);
        out += ": ";
        write(value, out, depth + 1);
      }
      out += "\n" + indent + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : node) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write(value, out, depth + 1);
      }
      out += "\n" + indent + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::string:
      escape_string(node.get_ref<const std::string&>(), out);
      return;
    case nlohmann::ordered_json::value_t::boolean:
      out += node.get<bool>() ? "true" : "false";
      return;
    case nlohmann::ordered_json::value_t::number_integer:
      out += std::to_string(node.get<std::int64_t>());
      return;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out += std::to_string(node.get<std::uint64_t>());
      return;
    case nlohmann::ordered_json::value_t::number_float:
      out += format_double(node.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace

std::string dump_canonical(const nlohmann::ordered_json& doc) {
  std::string out;
  write(doc, out, 0);
  out += "\n";
  return out;
}

}  // namespace polarcone_cli
