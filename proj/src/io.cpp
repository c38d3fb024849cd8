#include "rmtlab/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace rmtlab {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_values_csv(const std::filesystem::path& path, const StatSummary& s) {
  std::string text = "group,value\n";
  for (double v : s.values) text += "a," + format_double(v) + "\n";
  for (double v : s.reference_values) text += "b," + format_double(v) + "\n";
  write_text(path, text);
}

void write_summary(const std::filesystem::path& path, const StatSummary& s, std::string_view params,
                   double wall_time_s) {
  std::string text;
  text += "experiment = " + s.experiment + "\n";
  text += "params = " + std::string(params) + "\n";
  text += "ks = " + format_double(s.ks_to_reference) + "\n";
  text += "ci = " + format_double(s.ci_halfwidth) + "\n";
  text += "n_samples = " + std::to_string(s.n_samples) + "\n";
  text += "seed = " + std::to_string(s.seed) + "\n";
  text += "wall_time_s = " + format_double(wall_time_s) + "\n";
  for (const auto& [k, v] : s.extras) text += k + " = " + format_double(v) + "\n";
  write_text(path, text);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.config_hash));
  std::string text;
  text += "command = " + m.command + "\n";
  text += "config_hash = " + std::string(hash) + "\n";
  text += "master_seed = " + std::to_string(m.master_seed) + "\n";
  text += "started = " + m.started + "\n";
  text += "finished = " + m.finished + "\n";
  for (const auto& p : m.outputs) text += "output = " + p.string() + "\n";
  write_text(path, text);
}

std::string matrix_csv(const SymmetricMatrix& m) {
  std::string text;
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j > 0) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  return text;
}

std::string spectrum_csv(const SpectralSample& s) {
  std::string text = "index,eigenvalue,overlap\n";
  for (std::size_t a = 0; a < s.n(); ++a) {
    text += std::to_string(a + 1) + "," + format_double(s.eigenvalues[a]) + ",";
    if (s.overlaps) text += format_double((*s.overlaps)[a]);
    text += '\n';
  }
  return text;
}

std::string probes_csv(std::span<const LocalLawRow> rows) {
  std::string text = "E,eta,re_m,im_m,re_msc,im_msc,ratio\n";
  for (const LocalLawRow& r : rows) {
    text += format_double(r.z.energy) + "," + format_double(r.z.eta) + "," + format_double(r.m.real()) + "," +
            format_double(r.m.imag()) + "," + format_double(r.msc.real()) + "," + format_double(r.msc.imag()) + "," +
            format_double(r.ratio) + "\n";
  }
  return text;
}

std::string dbm_snapshot_header(std::size_t n) {
  std::string text = "t";
  for (std::size_t i = 1; i <= n; ++i) text += ",x_" + std::to_string(i);
  return text + "\n";
}

std::string dbm_snapshot_row(const DbmState& s) {
  std::string text = format_double(s.t);
  for (double v : s.x) text += "," + format_double(v);
  return text + "\n";
}

}  // namespace rmtlab
