#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmtlab/dbm.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/matrix.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

/// 17 significant digits (round-trip safe), independent of the locale.
std::string format_double(double v);

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string started;
  std::string finished;
  std::vector<std::filesystem::path> outputs;
};

/// Each writer replaces the file and throws std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, std::string_view text);

/// `group,value` rows; group is `a` for values and `b` for reference values.
void write_values_csv(const std::filesystem::path& path, const StatSummary& s);

/// key = value lines: experiment, params, ks, ci, n_samples, seed,
/// wall_time_s, then every extra.
void write_summary(const std::filesystem::path& path, const StatSummary& s, std::string_view params,
                   double wall_time_s);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

/// N rows of N comma-separated entries.
std::string matrix_csv(const SymmetricMatrix& m);
/// `index,eigenvalue,overlap` (overlap empty when not computed); index is 1-based.
std::string spectrum_csv(const SpectralSample& s);
/// `E,eta,re_m,im_m,re_msc,im_msc,ratio`.
std::string probes_csv(std::span<const LocalLawRow> rows);
/// `t,x_1,...,x_N` header for DBM snapshots, and one row per state.
std::string dbm_snapshot_header(std::size_t n);
std::string dbm_snapshot_row(const DbmState& s);

}  // namespace rmtlab
