#include "rmtlab/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rmtlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a decimal number: '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
  KeyValueFile kv;
  kv.source_ = std::move(source);
  kv.text_ = std::string(text);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = kv.source_ + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (kv.find(key)) throw ConfigError(where + ": field '" + std::string(key) + "' given twice");
    kv.entries_.push_back({std::string(key), std::string(value), line_no});
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void KeyValueFile::set(std::string_view key, std::string value) {
  for (Entry& e : entries_) {
    if (e.key == key) {
      e.value = std::move(value);
      e.line = 0;
      return;
    }
  }
  entries_.push_back({std::string(key), std::move(value), 0});
}

const KeyValueFile::Entry* KeyValueFile::find(std::string_view key) const {
  for (const Entry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const KeyValueFile::Entry& KeyValueFile::require(std::string_view key) const {
  if (const Entry* e = find(key)) return *e;
  throw ConfigError(source_ + ": missing field '" + std::string(key) + "'");
}

void KeyValueFile::fail(const Entry& e, std::string_view what) const {
  const std::string where = e.line > 0 ? source_ + ":" + std::to_string(e.line) : source_ + ":<override>";
  throw ConfigError(where + ": field '" + e.key + "': " + std::string(what));
}

std::string KeyValueFile::get_string(std::string_view key) const { return require(key).value; }

double KeyValueFile::get_double(std::string_view key) const {
  const Entry& e = require(key);
  try {
    return parse_double(e.value);
  } catch (const std::invalid_argument& ex) {
    fail(e, ex.what());
  }
}

std::uint64_t KeyValueFile::get_u64(std::string_view key) const {
  const Entry& e = require(key);
  try {
    return parse_u64(e.value);
  } catch (const std::invalid_argument& ex) {
    fail(e, ex.what());
  }
}

std::size_t KeyValueFile::get_size(std::string_view key) const { return static_cast<std::size_t>(get_u64(key)); }

std::vector<std::size_t> KeyValueFile::get_size_list(std::string_view key) const {
  const Entry& e = require(key);
  std::vector<std::size_t> out;
  std::string_view rest = e.value;
  try {
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(static_cast<std::size_t>(parse_u64(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  } catch (const std::invalid_argument& ex) {
    fail(e, ex.what());
  }
  return out;
}

double KeyValueFile::get_double_or(std::string_view key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}
std::uint64_t KeyValueFile::get_u64_or(std::string_view key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}
std::size_t KeyValueFile::get_size_or(std::string_view key, std::size_t fallback) const {
  return has(key) ? get_size(key) : fallback;
}
std::string KeyValueFile::get_string_or(std::string_view key, std::string fallback) const {
  return has(key) ? get_string(key) : fallback;
}

EnsembleSpec read_ensemble_spec(const KeyValueFile& kv, std::string_view prefix, bool need_seed) {
  const std::string p(prefix);
  EnsembleSpec spec;
  const std::string kind_key = p + "kind";
  try {
    spec.kind = parse_ensemble_kind(kv.get_string(kind_key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(kv.source() + ": field '" + kind_key + "': " + ex.what());
  }
  spec.n = kv.get_size(p + "n");
  if (spec.kind != EnsembleKind::GOE) {
    spec.q = kv.get_double(p + "q");
  } else {
    spec.q = kv.get_double_or(p + "q", 0.0);
  }
  spec.f = kv.get_double_or(p + "f", 0.0);
  spec.t = kv.get_double_or(p + "t", 0.0);
  spec.seed = need_seed ? kv.get_u64(p + "seed") : kv.get_u64_or(p + "seed", 0);
  try {
    spec.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(kv.source() + ": ensemble '" + p + "': " + ex.what());
  }
  return spec;
}

}  // namespace rmtlab
