#include "mprofile/anytime_runtime.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "file_util.hpp"
#include "le_bytes.hpp"
#include "mprofile/error.hpp"
#include "mprofile/window_stats.hpp"

namespace mprofile {
namespace {

using Clock = std::chrono::steady_clock;

constexpr char kMagic[4] = {'M', 'P', 'X', 'C'};

std::string describe(const DiagonalSegment& s) {
  return "segment (diagonal=" + std::to_string(s.diagonal) +
         ", start_row=" + std::to_string(s.start_row) +
         ", length=" + std::to_string(s.length) + ")";
}

/// Coordinator/worker rendezvous. Workers only touch their own
/// LocalProfile outside the lock; everything here is guarded by `mu`.
struct Rendezvous {
  std::mutex mu;
  std::condition_variable coordinator_cv;
  std::condition_variable worker_cv;
  bool pause_requested = false;
  std::uint64_t epoch = 0;
  std::size_t parked = 0;
  std::size_t finished = 0;
  std::uint64_t completed = 0;
  std::uint64_t next_snapshot = 0;
  std::vector<std::uint64_t> cursors;
  std::string failure;
  std::atomic<bool> abort{false};
};

class Execution {
 public:
  Execution(const TimeSeries& ts, const RunConfig& cfg,
            const RunOptions& opt, std::uint32_t checksum)
      : ts_(ts),
        cfg_(cfg),
        opt_(opt),
        checksum_(checksum),
        stats_(compute_stats(ts, cfg.m)),
        plan_(plan(ts.subsequence_count(cfg.m), cfg.ez, cfg.workers,
                   cfg.segment_len, cfg.order_seed)),
        locals_(cfg.workers, LocalProfile(ts.subsequence_count(cfg.m))) {}

  void seed(std::vector<std::uint64_t> cursors, const LocalProfile& profile) {
    if (cursors.size() != plan_.workers() ||
        profile.size() != locals_[0].size()) {
      throw CheckpointError("checkpoint does not match the run layout");
    }
    for (std::size_t w = 0; w < cursors.size(); ++w) {
      if (cursors[w] > plan_.assignments[w].size()) {
        throw CheckpointError("checkpoint cursor beyond worker " +
                              std::to_string(w) + "'s segment list");
      }
    }
    sync_.cursors = std::move(cursors);
    locals_[0] = profile;
  }

  Snapshot execute() {
    if (sync_.cursors.empty()) sync_.cursors.assign(plan_.workers(), 0);
    for (auto c : sync_.cursors) sync_.completed += c;
    sync_.next_snapshot = sync_.completed + cfg_.snapshot_interval;

    start_ = Clock::now();
    if (cfg_.time_budget) {
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(*cfg_.time_budget));
    }

    std::vector<std::jthread> threads;
    threads.reserve(plan_.workers());
    try {
      for (std::size_t w = 0; w < plan_.workers(); ++w) {
        threads.emplace_back([this, w] { work(w); });
      }
      coordinate();
    } catch (...) {
      release_workers();
      threads.clear();
      throw;
    }
    threads.clear();

    if (!sync_.failure.empty()) throw WorkerFailure(sync_.failure);
    LocalProfile merged = merge_squared(locals_);
    if (opt_.checkpoint_path) save(merged);
    return snapshot(merged);
  }

 private:
  bool should_stop() const {
    if (sync_.abort.load(std::memory_order_relaxed)) return true;
    if (opt_.cancel && opt_.cancel->load(std::memory_order_relaxed)) {
      return true;
    }
    return deadline_ && Clock::now() >= *deadline_;
  }

  void work(std::size_t w) {
    const auto& segs = plan_.assignments[w];
    std::unique_lock lk(sync_.mu);
    for (std::size_t s = sync_.cursors[w]; s < segs.size(); ++s) {
      if (sync_.pause_requested) {
        ++sync_.parked;
        sync_.coordinator_cv.notify_one();
        const auto e = sync_.epoch;
        sync_.worker_cv.wait(lk, [&] { return sync_.epoch != e; });
        --sync_.parked;
      }
      if (should_stop()) break;
      lk.unlock();
      try {
        if (opt_.before_segment) opt_.before_segment(w, segs[s]);
        traverse_segment(segs[s], ts_.values(), stats_, locals_[w]);
      } catch (const std::exception& e) {
        fail(w, segs[s], e.what());
        lk.lock();
        break;
      } catch (...) {
        fail(w, segs[s], "unknown error");
        lk.lock();
        break;
      }
      lk.lock();
      ++sync_.cursors[w];
      ++sync_.completed;
      if (!sync_.pause_requested &&
          sync_.completed >= sync_.next_snapshot) {
        sync_.pause_requested = true;
        sync_.coordinator_cv.notify_one();
      }
    }
    ++sync_.finished;
    sync_.coordinator_cv.notify_one();
  }

  void fail(std::size_t w, const DiagonalSegment& seg, const char* what) {
    std::lock_guard lk(sync_.mu);
    if (sync_.failure.empty()) {
      sync_.failure = "worker " + std::to_string(w) + " failed on " +
                      describe(seg) + ": " + what;
    }
    sync_.abort.store(true);
  }

  void coordinate() {
    const std::size_t workers = plan_.workers();
    std::unique_lock lk(sync_.mu);
    for (;;) {
      sync_.coordinator_cv.wait(lk, [&] {
        return sync_.finished == workers ||
               (sync_.pause_requested &&
                sync_.parked + sync_.finished == workers);
      });
      if (sync_.finished == workers) return;

      // Quiesced: every live worker is parked at a segment boundary.
      if (opt_.on_snapshot || opt_.checkpoint_path) {
        LocalProfile merged = merge_squared(locals_);
        if (opt_.checkpoint_path) save(merged);
        if (opt_.on_snapshot) opt_.on_snapshot(snapshot(merged));
      }
      sync_.next_snapshot = sync_.completed + cfg_.snapshot_interval;
      sync_.pause_requested = false;
      ++sync_.epoch;
      sync_.worker_cv.notify_all();
    }
  }

  void release_workers() {
    sync_.abort.store(true);
    std::lock_guard lk(sync_.mu);
    sync_.pause_requested = false;
    ++sync_.epoch;
    sync_.worker_cv.notify_all();
  }

  Snapshot snapshot(const LocalProfile& merged) const {
    Snapshot snap;
    snap.profile = to_matrix_profile(merged, cfg_.m, cfg_.ez);
    std::uint64_t done = 0;
    for (std::size_t w = 0; w < plan_.workers(); ++w) {
      done += cells_in_prefix(plan_, w, sync_.cursors[w]);
    }
    snap.fraction_done =
        static_cast<double>(done) / static_cast<double>(plan_.total_cells);
    snap.exact = done == plan_.total_cells;
    snap.wall_time =
        std::chrono::duration<double>(Clock::now() - start_).count();
    return snap;
  }

  void save(const LocalProfile& merged) const {
    RunState state;
    state.config = cfg_;
    state.series_length = ts_.size();
    state.series_checksum = checksum_;
    state.cursors = sync_.cursors;
    state.merged = merged;
    save_checkpoint(state, *opt_.checkpoint_path);
  }

  const TimeSeries& ts_;
  const RunConfig cfg_;
  const RunOptions& opt_;
  const std::uint32_t checksum_;
  const WindowStats stats_;
  const WorkPlan plan_;
  std::vector<LocalProfile> locals_;
  Rendezvous sync_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
};

}  // namespace

LocalProfile merge_squared(std::span<const LocalProfile> locals) {
  if (locals.empty()) return {};
  const std::size_t n = locals[0].size();
  for (const auto& lp : locals) {
    if (lp.size() != n || lp.nn.size() != n) {
      throw std::logic_error("merge: local profiles differ in length");
    }
  }
  LocalProfile out = locals[0];
  for (std::size_t w = 1; w < locals.size(); ++w) {
    const auto& lp = locals[w];
    for (std::size_t i = 0; i < n; ++i) out.offer(i, lp.dist2[i], lp.nn[i]);
  }
  return out;
}

MatrixProfile to_matrix_profile(const LocalProfile& lp, std::size_t window,
                                std::size_t exclusion) {
  MatrixProfile mp;
  mp.dist.resize(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i) mp.dist[i] = std::sqrt(lp.dist2[i]);
  mp.nn = lp.nn;
  mp.window = window;
  mp.exclusion = exclusion;
  return mp;
}

MatrixProfile merge(std::span<const LocalProfile> locals) {
  return to_matrix_profile(merge_squared(locals), 0, 0);
}

std::uint32_t series_checksum(const TimeSeries& ts) {
  boost::crc_32_type crc;
  std::string buf;
  buf.reserve(8);
  for (double v : ts.values()) {
    buf.clear();
    detail::put_f64(buf, v);
    crc.process_bytes(buf.data(), buf.size());
  }
  return crc.checksum();
}

Snapshot run(const TimeSeries& ts, const RunConfig& config,
             const RunOptions& options) {
  config.validate(ts.size());
  Execution exec(ts, config, options, series_checksum(ts));
  return exec.execute();
}

Snapshot run_from_state(const TimeSeries& ts, const RunState& state,
                        const RunOptions& options) {
  const std::uint32_t checksum = series_checksum(ts);
  if (ts.size() != state.series_length || checksum != state.series_checksum) {
    throw CheckpointError(
        "checkpoint was taken from a different series (length or content "
        "checksum mismatch)");
  }
  state.config.validate(ts.size());
  Execution exec(ts, state.config, options, checksum);
  exec.seed(state.cursors, state.merged);
  return exec.execute();
}

Snapshot resume(const std::filesystem::path& path, const TimeSeries& ts,
                const RunOptions& options, std::optional<double> time_budget) {
  RunState state = load_checkpoint(path);
  if (time_budget) state.config.time_budget = time_budget;
  return run_from_state(ts, state, options);
}

void save_checkpoint(const RunState& state,
                     const std::filesystem::path& path) {
  using namespace detail;
  const RunConfig& c = state.config;
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kCheckpointVersion);
  put_u64(out, c.m);
  put_u64(out, c.ez);
  put_u64(out, c.workers);
  put_u64(out, c.segment_len);
  put_u64(out, c.order_seed);
  put_u64(out, c.snapshot_interval);
  put_f64(out, c.time_budget ? *c.time_budget : -1.0);
  put_u64(out, state.series_length);
  put_u32(out, state.series_checksum);
  put_u64(out, state.cursors.size());
  for (auto cur : state.cursors) put_u64(out, cur);
  put_u64(out, state.merged.size());
  for (double d : state.merged.dist2) put_f64(out, d);
  for (auto nn : state.merged.nn) put_u64(out, nn);

  boost::crc_32_type crc;
  crc.process_bytes(out.data(), out.size());
  put_u32(out, crc.checksum());
  write_file_atomic(path, out);
}

RunState load_checkpoint(const std::filesystem::path& path) {
  std::string data;
  try {
    data = detail::read_file(path);
  } catch (const IoError& e) {
    throw CheckpointError(e.what());
  }
  const auto bytes = std::span(
      reinterpret_cast<const unsigned char*>(data.data()), data.size());
  if (bytes.size() < 12 || !std::equal(kMagic, kMagic + 4, data.begin())) {
    throw CheckpointError(path.string() + " is not a checkpoint file");
  }
  const std::uint32_t version = detail::get_u32(bytes.subspan(4, 4));
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size() - 4);
  if (crc.checksum() != detail::get_u32(bytes.last(4))) {
    throw CheckpointError("checkpoint checksum mismatch in " + path.string());
  }

  detail::ByteReader in(bytes.first(bytes.size() - 4).subspan(8));
  RunState state;
  RunConfig& c = state.config;
  c.m = in.u64();
  c.ez = in.u64();
  c.workers = in.u64();
  c.segment_len = in.u64();
  c.order_seed = in.u64();
  c.snapshot_interval = in.u64();
  const double budget = in.f64();
  if (budget >= 0.0) c.time_budget = budget;
  state.series_length = in.u64();
  state.series_checksum = in.u32();
  const std::uint64_t workers = in.u64();
  if (!in.ok() || workers != c.workers || workers > in.remaining() / 8) {
    throw CheckpointError("corrupt checkpoint header");
  }
  state.cursors.resize(workers);
  for (auto& cur : state.cursors) cur = in.u64();
  const std::uint64_t n_sub = in.u64();
  if (!in.ok() || n_sub != in.remaining() / 16 || in.remaining() % 16 != 0) {
    throw CheckpointError("corrupt checkpoint profile section");
  }
  state.merged = LocalProfile(n_sub);
  for (auto& d : state.merged.dist2) d = in.f64();
  for (auto& nn : state.merged.nn) nn = in.u64();
  return state;
}

}  // namespace mprofile
