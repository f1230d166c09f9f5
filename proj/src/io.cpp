#include "adaptnet/io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "adaptnet/seeding.hpp"

namespace adaptnet {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

constexpr const char* kProfilesHeader =
    "replicate,node,faction,window_end,nlz,replicate_seed,master_seed,config_hash";
constexpr const char* kBandsHeader =
    "faction,window_end,mean,ci_low,ci_high,replicate_count,master_seed,config_hash";
constexpr const char* kEffectsHeader =
    "transition,t_star,delta_mean,ci_half,t,p,d,stars,runs,master_seed,config_hash";
constexpr const char* kRecordsHeader =
    "transition,t_star,replicate,focal_node,window_end,baseline_nlz,intervention_nlz,delta,"
    "replicate_seed,orig_h,orig_a,orig_c,new_h,new_a,new_c,master_seed,config_hash";
constexpr const char* kInterventionBandsHeader =
    "transition,t_star,branch,aggregation,window_end,mean,ci_low,ci_high,replicate_count,master_seed,"
    "config_hash";

// Reads rows of a fixed-width CSV family, checking the header.
class CsvReader {
 public:
  CsvReader(std::istream& in, const char* header, std::size_t columns) : in_(in), columns_(columns) {
    std::string line;
    if (!std::getline(in_, line) || line != header)
      throw std::runtime_error(fmt::format("unexpected CSV header; expected '{}'", header));
    line_no_ = 1;
  }

  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty()) continue;
      fields_.clear();
      std::size_t pos = 0;
      for (;;) {
        const auto comma = line.find(',', pos);
        fields_.push_back(line.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (fields_.size() != columns_)
        throw std::runtime_error(
            fmt::format("line {}: expected {} columns, found {}", line_no_, columns_, fields_.size()));
      return true;
    }
    return false;
  }

  const std::string& str(std::size_t k) const { return fields_[k]; }

  double real(std::size_t k) const {
    const auto& s = fields_[k];
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) fail(k, "a number");
    return v;
  }

  std::uint64_t u64(std::size_t k) const {
    const auto& s = fields_[k];
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size()) fail(k, "an unsigned integer");
    return v;
  }

  Faction faction(std::size_t k) const {
    auto f = parse_faction(fields_[k]);
    if (!f) fail(k, "a faction name");
    return *f;
  }

  Transition transition(std::size_t k) const {
    const auto& s = fields_[k];
    const auto arrow = s.find("->");
    auto from = arrow == std::string::npos ? std::nullopt : parse_faction(s.substr(0, arrow));
    auto to = arrow == std::string::npos ? std::nullopt : parse_faction(s.substr(arrow + 2));
    if (!from || !to) fail(k, "a transition");
    return {*from, *to};
  }

 private:
  [[noreturn]] void fail(std::size_t k, const char* what) const {
    throw std::runtime_error(fmt::format("line {} column {}: '{}' is not {}", line_no_, k + 1, fields_[k], what));
  }

  std::istream& in_;
  std::size_t columns_;
  std::size_t line_no_ = 0;
  std::vector<std::string> fields_;
};

}  // namespace

void write_profiles_csv(std::ostream& out, std::span<const ProfileRecord> records, const RowMeta& meta) {
  out << kProfilesHeader << '\n';
  for (const auto& r : records)
    for (std::size_t k = 0; k < r.profile.window_ends.size(); ++k)
      out << fmt::format("{},{},{},{},{},{},{},{}\n", r.replicate, r.node, to_string(r.faction),
                         r.profile.window_ends[k], format_double(r.profile.nlz_values[k]), r.replicate_seed,
                         meta.master_seed, meta.config_hash);
}

std::vector<ProfileRecord> read_profiles_csv(std::istream& in, RowMeta* meta) {
  CsvReader csv(in, kProfilesHeader, 8);
  std::vector<ProfileRecord> out;
  while (csv.next()) {
    const auto rep = csv.u64(0);
    const auto node = csv.u64(1);
    if (out.empty() || out.back().replicate != rep || out.back().node != node) {
      ProfileRecord r;
      r.replicate = rep;
      r.node = node;
      r.faction = csv.faction(2);
      r.replicate_seed = csv.u64(5);
      r.profile.node = node;
      out.push_back(std::move(r));
    }
    out.back().profile.window_ends.push_back(csv.u64(3));
    out.back().profile.nlz_values.push_back(csv.real(4));
    if (meta) {
      meta->master_seed = csv.u64(6);
      meta->config_hash = csv.str(7);
    }
  }
  return out;
}

void write_bands_csv(std::ostream& out, std::span<const TrajectoryBand> bands, const RowMeta& meta) {
  out << kBandsHeader << '\n';
  for (const auto& b : bands)
    for (std::size_t k = 0; k < b.window_ends.size(); ++k)
      out << fmt::format("{},{},{},{},{},{},{},{}\n", to_string(b.faction), b.window_ends[k],
                         format_double(b.mean[k]), format_double(b.ci_low[k]), format_double(b.ci_high[k]),
                         b.replicate_count, meta.master_seed, meta.config_hash);
}

std::vector<TrajectoryBand> read_bands_csv(std::istream& in) {
  CsvReader csv(in, kBandsHeader, 8);
  std::vector<TrajectoryBand> out;
  while (csv.next()) {
    const auto f = csv.faction(0);
    if (out.empty() || out.back().faction != f) {
      out.emplace_back();
      out.back().faction = f;
      out.back().replicate_count = csv.u64(5);
    }
    auto& b = out.back();
    b.window_ends.push_back(csv.u64(1));
    b.mean.push_back(csv.real(2));
    b.ci_low.push_back(csv.real(3));
    b.ci_high.push_back(csv.real(4));
  }
  return out;
}

void write_effects_csv(std::ostream& out, std::span<const EffectSummary> rows, const RowMeta& meta) {
  out << kEffectsHeader << '\n';
  for (const auto& s : rows)
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", s.transition.label(), s.t_star,
                       format_double(s.delta_mean), format_double(s.ci_half_width),
                       format_double(s.t_statistic), format_double(s.p_value), format_double(s.cohens_d),
                       s.stars, s.runs, meta.master_seed, meta.config_hash);
}

void write_intervention_records_csv(std::ostream& out, std::span<const InterventionRecord> records,
                                    const RowMeta& meta) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    const auto& o = r.original_params;
    const auto& a = r.assigned_params;
    for (std::size_t k = 0; k < r.baseline_profile.window_ends.size(); ++k)
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.transition.label(),
                         r.t_star, r.replicate, r.focal_node, r.baseline_profile.window_ends[k],
                         format_double(r.baseline_profile.nlz_values[k]),
                         format_double(r.intervention_profile.nlz_values[k]), format_double(r.delta),
                         r.replicate_seed, format_double(o.homophily), format_double(o.novelty),
                         format_double(o.conformity), format_double(a.homophily), format_double(a.novelty),
                         format_double(a.conformity), meta.master_seed, meta.config_hash);
  }
}

std::vector<InterventionRecord> read_intervention_records_csv(std::istream& in, RowMeta* meta) {
  CsvReader csv(in, kRecordsHeader, 17);
  std::vector<InterventionRecord> out;
  while (csv.next()) {
    const auto tr = csv.transition(0);
    const auto t_star = csv.u64(1);
    const auto rep = csv.u64(2);
    const auto node = csv.u64(3);
    if (out.empty() || out.back().transition != tr || out.back().t_star != t_star ||
        out.back().replicate != rep || out.back().focal_node != node) {
      InterventionRecord r;
      r.transition = tr;
      r.t_star = t_star;
      r.replicate = rep;
      r.focal_node = node;
      r.delta = csv.real(7);
      r.replicate_seed = csv.u64(8);
      r.original_params = {csv.real(9), csv.real(10), csv.real(11)};
      r.assigned_params = {csv.real(12), csv.real(13), csv.real(14)};
      r.baseline_profile.node = node;
      r.intervention_profile.node = node;
      out.push_back(std::move(r));
    }
    auto& r = out.back();
    const auto end = csv.u64(4);
    r.baseline_profile.window_ends.push_back(end);
    r.intervention_profile.window_ends.push_back(end);
    r.baseline_profile.nlz_values.push_back(csv.real(5));
    r.intervention_profile.nlz_values.push_back(csv.real(6));
    if (meta) {
      meta->master_seed = csv.u64(15);
      meta->config_hash = csv.str(16);
    }
  }
  return out;
}

void write_intervention_bands_csv(std::ostream& out, std::span<const InterventionBand> rows,
                                  const RowMeta& meta) {
  out << kInterventionBandsHeader << '\n';
  for (const auto& row : rows) {
    const auto& b = row.band;
    for (std::size_t k = 0; k < b.window_ends.size(); ++k)
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", row.transition.label(), row.t_star, row.branch,
                         row.aggregation, b.window_ends[k], format_double(b.mean[k]),
                         format_double(b.ci_low[k]), format_double(b.ci_high[k]), b.replicate_count,
                         meta.master_seed, meta.config_hash);
  }
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

constexpr char kMagic[8] = {'A', 'D', 'N', 'S', 'N', 'A', 'P', '\0'};

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T))
      throw SnapshotError(SnapshotError::Reason::Truncated,
                          fmt::format("snapshot truncated at byte {}; checksum cannot be verified", pos_));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_snapshot(const Snapshot& snap) {
  const auto& s = snap.state;
  const std::size_t n = s.size();
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint64_t>(out, n);
  put<std::uint64_t>(out, s.step);
  put<std::uint64_t>(out, snap.noise_seed);
  for (double x : s.opinions) put(out, x);
  for (double w : s.weights) put(out, w);
  for (const auto& p : s.params) {
    put(out, p.homophily);
    put(out, p.novelty);
    put(out, p.conformity);
  }
  put<std::uint64_t>(out, fnv1a(out));
  return out;
}

Snapshot decode_snapshot(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw SnapshotError(SnapshotError::Reason::BadMagic, "not a network snapshot");
  ByteReader r(bytes.substr(sizeof(kMagic)));
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    throw SnapshotError(SnapshotError::Reason::VersionMismatch,
                        fmt::format("snapshot version {} is not supported (expected {})", version,
                                    kSnapshotVersion));
  const auto n = r.get<std::uint64_t>();
  const auto step = r.get<std::uint64_t>();
  const auto noise_seed = r.get<std::uint64_t>();
  // n * (n + 4) doubles plus the trailer must fit in what is left.
  const double need = (static_cast<double>(n) * (static_cast<double>(n) + 4.0) + 1.0) * 8.0;
  if (need > static_cast<double>(r.remaining()))
    throw SnapshotError(SnapshotError::Reason::Truncated,
                        fmt::format("snapshot for {} nodes is truncated; checksum cannot be verified", n));
  Snapshot snap{NetworkState(n), noise_seed};
  snap.state.step = step;
  for (auto& x : snap.state.opinions) x = r.get<double>();
  for (auto& w : snap.state.weights) w = r.get<double>();
  for (auto& p : snap.state.params) {
    p.homophily = r.get<double>();
    p.novelty = r.get<double>();
    p.conformity = r.get<double>();
  }
  const std::size_t body = sizeof(kMagic) + r.pos();
  const auto stored = r.get<std::uint64_t>();
  if (r.remaining() != 0)
    throw SnapshotError(SnapshotError::Reason::ChecksumMismatch, "trailing bytes after snapshot checksum");
  if (stored != fnv1a(bytes.substr(0, body)))
    throw SnapshotError(SnapshotError::Reason::ChecksumMismatch, "snapshot checksum mismatch");
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const auto bytes = encode_snapshot(snap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError(SnapshotError::Reason::Io, fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError(SnapshotError::Reason::Io, fmt::format("short write to '{}'", path.string()));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(SnapshotError::Reason::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_snapshot(buf.str());
}

// ---------------------------------------------------------------------------

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

OutputSet::~OutputSet() {
  if (committed_) return;
  for (auto& [path, stream] : files_) {
    stream->close();
    std::error_code ec;
    std::filesystem::remove(path.string() + ".partial", ec);
  }
}

std::ofstream& OutputSet::open(const std::string& relative) {
  auto path = dir_ / relative;
  std::filesystem::create_directories(path.parent_path());
  auto stream = std::make_unique<std::ofstream>(path.string() + ".partial", std::ios::trunc);
  if (!*stream) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  files_.emplace_back(path, std::move(stream));
  return *files_.back().second;
}

void OutputSet::commit() {
  for (auto& [path, stream] : files_) {
    stream->close();
    if (!*stream) throw std::runtime_error(fmt::format("error writing '{}'", path.string()));
  }
  for (auto& [path, stream] : files_) std::filesystem::rename(path.string() + ".partial", path);
  committed_ = true;
}

}  // namespace adaptnet
