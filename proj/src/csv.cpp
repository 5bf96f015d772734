#include "gasdetect/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return in;
}

}  // namespace

std::vector<Sample> read_samples_csv(std::istream& in, std::string_view source) {
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (line_no == 1 && text == "node_id,t,value") continue;
    auto bad = [&](const char* why) {
      return DataError(fmt::format("{}:{}: {}", source, line_no, why));
    };
    const auto fields = split(text);
    if (fields.size() != 3) throw bad("expected 3 fields node_id,t,value");
    const auto id = parse_number<NodeId>(fields[0]);
    const auto t = parse_number<double>(fields[1]);
    const auto v = parse_number<double>(fields[2]);
    if (!id) throw bad("node_id is not a non-negative integer");
    if (!t || !std::isfinite(*t) || *t < 0.0) throw bad("t is not a finite non-negative number");
    if (!v || !std::isfinite(*v)) throw bad("value is not a finite number");
    out.push_back({*id, *t, *v});
  }
  return out;
}

std::vector<Sample> read_samples_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_samples_csv(in, path.string());
}

void write_samples_csv(std::ostream& out, std::span<const Sample> samples, bool header) {
  if (header) out << "node_id,t,value\n";
  fmt::memory_buffer buf;
  for (const auto& s : samples) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{}\n", s.node_id, s.t, s.value);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

std::vector<double> read_column_csv(std::istream& in, std::string_view source) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto v = parse_number<double>(text);
    if (!v) {
      if (line_no == 1) continue;
      throw DataError(fmt::format("{}:{}: not a number", source, line_no));
    }
    if (!std::isfinite(*v)) throw DataError(fmt::format("{}:{}: not finite", source, line_no));
    out.push_back(*v);
  }
  return out;
}

std::vector<double> read_column_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_column_csv(in, path.string());
}

}  // namespace gasdetect
