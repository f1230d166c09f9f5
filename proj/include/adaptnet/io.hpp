#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptnet/records.hpp"
#include "adaptnet/stats.hpp"

namespace adaptnet {

/// Lineage columns carried by every result row.
struct RowMeta {
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

/// 17 significant digits; reads back to the identical double.
std::string format_double(double v);

// CSV families. Each has a fixed header line; columns are documented in the
// README. Readers accept exactly what the writers produce and throw
// std::runtime_error with a line number otherwise.

void write_profiles_csv(std::ostream& out, std::span<const ProfileRecord> records, const RowMeta& meta);
std::vector<ProfileRecord> read_profiles_csv(std::istream& in, RowMeta* meta = nullptr);

void write_bands_csv(std::ostream& out, std::span<const TrajectoryBand> bands, const RowMeta& meta);
std::vector<TrajectoryBand> read_bands_csv(std::istream& in);

void write_effects_csv(std::ostream& out, std::span<const EffectSummary> rows, const RowMeta& meta);

/// Long form: one row per (record, window).
void write_intervention_records_csv(std::ostream& out, std::span<const InterventionRecord> records,
                                    const RowMeta& meta);
std::vector<InterventionRecord> read_intervention_records_csv(std::istream& in, RowMeta* meta = nullptr);

/// Baseline and intervention bands per transition for plotting.
struct InterventionBand {
  Transition transition;
  std::uint64_t t_star = 0;
  std::string branch;       // "baseline" | "intervention"
  std::string aggregation;  // "node": over focal records; "run": per-replicate means first
  TrajectoryBand band;
};

void write_intervention_bands_csv(std::ostream& out, std::span<const InterventionBand> rows,
                                  const RowMeta& meta);

// Snapshots: little-endian binary with a version word and an FNV-1a
// trailer over everything before it.

class SnapshotError : public std::runtime_error {
 public:
  enum class Reason { BadMagic, VersionMismatch, Truncated, ChecksumMismatch, Io };
  SnapshotError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// State plus the seed of the noise stream that drives it; the stream
/// position is state.step.
struct Snapshot {
  NetworkState state;
  std::uint64_t noise_seed = 0;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

std::string encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(std::string_view bytes);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Files written through an OutputSet land under `name.partial` and are
/// renamed into place by commit(). Without a commit, the destructor
/// removes everything it opened.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  std::ofstream& open(const std::string& relative);
  void commit();
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::unique_ptr<std::ofstream>>> files_;
  bool committed_ = false;
};

}  // namespace adaptnet
