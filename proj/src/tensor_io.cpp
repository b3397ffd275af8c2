#include "salmon/tensor_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "salmon/errors.hpp"

namespace salmon {

using nlohmann::json;

std::string tensor_to_json(const Tensor3& t) {
  json j;
  j["dims"] = {t.m(), t.n(), t.l()};
  json entries = json::array();
  switch (t.field().kind()) {
    case ScalarKind::Rational:
      j["mode"] = "rational";
      for (const auto& e : t.entries()) entries.push_back(e.to_string());
      break;
    case ScalarKind::PrimeField:
      j["mode"] = "gfp";
      j["modulus"] = t.field().modulus();
      for (const auto& e : t.entries()) entries.push_back(e.residue_value());
      break;
    case ScalarKind::Float64:
      j["mode"] = "float";
      for (const auto& e : t.entries()) entries.push_back(e.float_value());
      break;
  }
  j["entries"] = std::move(entries);
  return j.dump() + "\n";
}

namespace {

Scalar parse_entry(const json& e, const Field& field) {
  switch (field.kind()) {
    case ScalarKind::Rational:
      if (e.is_string()) return field.parse(e.get<std::string>());
      if (e.is_number_integer()) return field.from_int(e.get<std::int64_t>());
      throw ModeMismatch("rational tensor entry must be a string or integer, got " + e.dump());
    case ScalarKind::PrimeField:
      if (e.is_number_unsigned()) return Scalar(Residue{e.get<std::uint64_t>() % field.modulus(), field.modulus()});
      if (e.is_number_integer()) return field.from_int(e.get<std::int64_t>());
      if (e.is_string()) return field.parse(e.get<std::string>());
      throw ModeMismatch("gfp tensor entry must be an integer, got " + e.dump());
    case ScalarKind::Float64:
      if (e.is_number()) return Scalar(e.get<double>());
      throw ModeMismatch("float tensor entry must be a number, got " + e.dump());
  }
  return {};
}

}  // namespace

Tensor3 tensor_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("tensor file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("mode") || !j.contains("entries")) {
    throw ParseError("tensor file needs \"dims\", \"mode\" and \"entries\"");
  }
  const json& dj = j["dims"];
  if (!dj.is_array() || dj.size() != 3) throw ParseError("\"dims\" must be an array of three integers");
  Tensor3::Dims dims{};
  for (int a = 0; a < 3; ++a) {
    if (!dj[a].is_number_integer()) throw ParseError("\"dims\" must be an array of three integers");
    dims[a] = dj[a].get<int>();
  }
  if (!j["mode"].is_string()) throw ParseError("\"mode\" must be a string");
  const std::string mode = j["mode"].get<std::string>();
  Field field = Field::rational();
  if (mode == "gfp") {
    if (!j.contains("modulus") || !j["modulus"].is_number_unsigned()) {
      throw ParseError("gfp tensor file needs a positive integer \"modulus\"");
    }
    field = Field::prime(j["modulus"].get<std::uint64_t>());
  } else if (mode == "float") {
    field = Field::float64();
  } else if (mode != "rational") {
    throw ParseError("unknown tensor mode '" + mode + "'");
  }
  const json& ej = j["entries"];
  if (!ej.is_array()) throw ParseError("\"entries\" must be an array");
  const std::size_t want = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  if (ej.size() != want) {
    throw DomainError("dimension mismatch: dims " + dj.dump() + " need " + std::to_string(want) +
                      " entries, file has " + std::to_string(ej.size()));
  }
  std::vector<Scalar> entries;
  entries.reserve(want);
  for (const auto& e : ej) entries.push_back(parse_entry(e, field));
  return Tensor3(dims, field, std::move(entries));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

Tensor3 read_tensor_file(const std::filesystem::path& path) { return tensor_from_json(read_text_file(path)); }

void write_tensor_file(const std::filesystem::path& path, const Tensor3& t) {
  write_text_file(path, tensor_to_json(t));
}

}  // namespace salmon
