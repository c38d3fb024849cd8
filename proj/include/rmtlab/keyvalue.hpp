#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmtlab/ensembles.hpp"

namespace rmtlab {

/// Malformed or incomplete configuration. The message names the source,
/// the line (when known) and the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `key = value` lines. '#' starts a comment; blank lines are ignored; keys
/// are unique. Numbers are parsed with std::from_chars, so the C locale is
/// irrelevant.
class KeyValueFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;  // 0 for values set programmatically
  };

  static KeyValueFile parse(std::string_view text, std::string source = "<config>");
  static KeyValueFile load(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  const std::string& text() const noexcept { return text_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  bool has(std::string_view key) const { return find(key) != nullptr; }
  /// Inserts or replaces a value (used for command-line overrides).
  void set(std::string_view key, std::string value);

  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;
  /// Comma-separated list of unsigned integers.
  std::vector<std::size_t> get_size_list(std::string_view key) const;

  double get_double_or(std::string_view key, double fallback) const;
  std::uint64_t get_u64_or(std::string_view key, std::uint64_t fallback) const;
  std::size_t get_size_or(std::string_view key, std::size_t fallback) const;
  std::string get_string_or(std::string_view key, std::string fallback) const;

 private:
  const Entry* find(std::string_view key) const;
  const Entry& require(std::string_view key) const;
  [[noreturn]] void fail(const Entry& e, std::string_view what) const;

  std::string source_;
  std::string text_;
  std::vector<Entry> entries_;
};

double parse_double(std::string_view s);        // throws std::invalid_argument
std::uint64_t parse_u64(std::string_view s);    // throws std::invalid_argument

/// Reads `<prefix>kind`, `<prefix>n`, `<prefix>q`, `<prefix>f`, `<prefix>t`
/// and, if `need_seed`, `<prefix>seed`. q is required for the sparse kinds.
/// The spec is validated; violations surface as ConfigError.
EnsembleSpec read_ensemble_spec(const KeyValueFile& kv, std::string_view prefix, bool need_seed);

}  // namespace rmtlab
