#include "dhopf/io.hpp"

#include "dhopf/errors.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace dhopf {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

namespace {

// SAX consumer building a DOM in which float literals are kept as their
// source text.
class VerbatimNumberBuilder {
 public:
  json result;

  bool null() { return put(json(nullptr)); }
  bool boolean(bool v) { return put(json(v)); }
  bool number_integer(json::number_integer_t v) { return put(json(v)); }
  bool number_unsigned(json::number_unsigned_t v) { return put(json(v)); }
  bool number_float(json::number_float_t, const json::string_t& text) { return put(json(text)); }
  bool string(json::string_t& v) { return put(json(v)); }
  bool binary(json::binary_t&) { return put(json(nullptr)); }

  bool start_object(std::size_t) {
    stack_.push_back(put_container(json::object()));
    return true;
  }
  bool key(json::string_t& k) {
    pending_key_ = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    stack_.push_back(put_container(json::array()));
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& e) {
    throw ParseError("JSON parse error at byte " + std::to_string(position) + ": " + e.what());
  }

 private:
  std::vector<json*> stack_;
  std::string pending_key_;

  json* put_container(json value) {
    if (stack_.empty()) {
      result = std::move(value);
      return &result;
    }
    json& parent = *stack_.back();
    if (parent.is_object()) {
      parent[pending_key_] = std::move(value);
      return &parent[pending_key_];
    }
    parent.push_back(std::move(value));
    return &parent.back();
  }
  bool put(json value) {
    put_container(std::move(value));
    return true;
  }
};

}  // namespace

json parse_json_exact(std::string_view text) {
  VerbatimNumberBuilder builder;
  const bool ok = json::sax_parse(text.begin(), text.end(), &builder);
  if (!ok) throw ParseError("JSON parse error");
  return std::move(builder.result);
}

Rational rational_from_json(const json& value) {
  if (value.is_number_unsigned()) return Rational(std::to_string(value.get<std::uint64_t>()));
  if (value.is_number_integer()) return Rational(std::to_string(value.get<std::int64_t>()));
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (value.is_number_float()) return from_double(value.get<double>());
  throw ParseError("expected a number, got " + std::string(value.type_name()));
}

}  // namespace dhopf
