#include "oaekit/oae/batch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oaekit/audio/wav.hpp"
#include "oaekit/error.hpp"
#include "oaekit/oae/align.hpp"
#include "oaekit/stimulus/bundle.hpp"

namespace oaekit::oae {

using stimulus::Manifest;
using stimulus::Segment;

namespace {

std::string hz(double f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", f);
  return buf;
}

MagnitudeRecord extract_segment(const Manifest& m, const Segment& seg, const audio::SampleBuffer& rec,
                                std::size_t begin, const ExtractOptions& opts) {
  if (rec.sample_rate() != m.sample_rate) {
    throw SchemaViolation("recording for segment " + std::to_string(seg.index) + " is at " +
                          std::to_string(rec.sample_rate()) + " Hz, manifest says " +
                          std::to_string(m.sample_rate));
  }
  if (begin + seg.length() > rec.size()) {
    throw SchemaViolation("recording ends before segment " + std::to_string(seg.index) +
                          " (" + seg.file + ") does: marker/segment mismatch");
  }
  auto r = extract_magnitude(rec, seg.f_s_hz, begin, begin + seg.length(), opts);
  const double gain = std::pow(10.0, seg.norm_gain_db / 20.0);
  r.magnitude /= gain;
  r.noise_floor /= gain;
  r.participant_id = m.participant_id;
  r.task_id = seg.task_id;
  r.repetition = seg.repetition;
  return r;
}

BatchResult finish(const Manifest& m, std::vector<MagnitudeRecord> mags) {
  std::stable_sort(mags.begin(), mags.end(), [](const auto& a, const auto& b) {
    if (a.f_s_hz != b.f_s_hz) return a.f_s_hz < b.f_s_hz;
    if (a.task_id != b.task_id) return a.task_id < b.task_id;
    return a.repetition < b.repetition;
  });
  // Repetitions are averaged before differencing.
  std::map<std::pair<double, int>, std::pair<double, int>> mean;
  for (const auto& r : mags) {
    auto& acc = mean[{r.f_s_hz, r.task_id}];
    acc.first += r.magnitude;
    acc.second += 1;
  }
  BatchResult out;
  for (const auto& [key, acc] : mean) {
    if (key.second == 1) continue;
    MagnitudeRecord task, base;
    task.participant_id = base.participant_id = m.participant_id;
    task.f_s_hz = base.f_s_hz = key.first;
    task.task_id = key.second;
    task.magnitude = acc.first / acc.second;
    const auto& b = mean.at({key.first, 1});
    base.magnitude = b.first / b.second;
    out.seds.push_back(sed(task, base));
  }
  out.magnitudes = std::move(mags);
  return out;
}

}  // namespace

void require_baselines(const Manifest& m) {
  std::set<double> base;
  for (const auto& s : m.segments) {
    if (s.task_id == 1) base.insert(s.f_s_hz);
  }
  for (const auto& s : m.segments) {
    if (s.task_id != 1 && !base.contains(s.f_s_hz)) {
      throw MissingInput("no baseline (task 1) segment for f_s = " + hz(s.f_s_hz) + " Hz");
    }
  }
}

BatchResult batch_extract(const Manifest& m, const std::vector<audio::SampleBuffer>& recordings,
                          const BatchOptions& options) {
  require_baselines(m);
  if (recordings.size() != m.segments.size()) {
    throw SchemaViolation("got " + std::to_string(recordings.size()) + " recordings for " +
                          std::to_string(m.segments.size()) + " manifest segments");
  }
  std::vector<MagnitudeRecord> mags;
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    mags.push_back(extract_segment(m, m.segments[i], recordings[i], 0, options.extract));
  }
  return finish(m, std::move(mags));
}

BatchResult batch_extract_continuous(const Manifest& m, const audio::SampleBuffer& recording,
                                     const BatchOptions& options, const audio::SampleBuffer* reference) {
  require_baselines(m);
  audio::SampleBuffer aligned = recording;
  std::optional<long> lag;
  if (options.align) {
    if (reference == nullptr) throw InvalidArgument("alignment requested without a reference playback");
    const auto max_lag = static_cast<std::size_t>(std::lround(options.align_window * m.sample_rate));
    const auto a = estimate_offset(*reference, recording, max_lag);
    lag = a.lag;
    aligned = remove_offset(recording, a.lag);
  }
  if (aligned.size() < m.timeline_length()) {
    throw SchemaViolation("continuous recording has " + std::to_string(aligned.size()) +
                          " samples but the manifest timeline needs " +
                          std::to_string(m.timeline_length()));
  }
  std::vector<MagnitudeRecord> mags;
  for (const auto& seg : m.segments) {
    mags.push_back(extract_segment(m, seg, aligned, seg.start_sample, options.extract));
  }
  auto out = finish(m, std::move(mags));
  out.alignment_lag = lag;
  return out;
}

BatchResult extract_session(const std::filesystem::path& session_dir,
                            const std::optional<std::filesystem::path>& recordings_dir,
                            const BatchOptions& options) {
  const auto m = stimulus::read_manifest(session_dir / "manifest.json");
  require_baselines(m);
  const auto dir = recordings_dir.value_or(session_dir / kRecordingsDir);
  if (!std::filesystem::is_directory(dir)) throw MissingInput("recordings directory not found: " + dir.string());

  const auto continuous = dir / kContinuousRecording;
  if (std::filesystem::exists(continuous)) {
    const auto rec = audio::load_wav(continuous);
    if (options.align) {
      const auto playback = stimulus::continuous_playback(stimulus::read_session(options.playback_dir.value_or(session_dir)));
      return batch_extract_continuous(m, rec, options, &playback);
    }
    return batch_extract_continuous(m, rec, options);
  }
  // Check every file before reading any.
  for (const auto& seg : m.segments) {
    if (!std::filesystem::exists(dir / seg.file)) {
      const std::string what = seg.task_id == 1 ? "baseline (task 1) recording" : "recording";
      throw MissingInput(what + " not found for segment " + std::to_string(seg.index) + ": " +
                         (dir / seg.file).string());
    }
  }
  std::vector<audio::SampleBuffer> recs;
  for (const auto& seg : m.segments) recs.push_back(audio::load_wav(dir / seg.file));
  return batch_extract(m, recs, options);
}

}  // namespace oaekit::oae
