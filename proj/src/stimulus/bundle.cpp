#include "oaekit/stimulus/bundle.hpp"

#include <cmath>
#include <map>

#include "oaekit/error.hpp"

namespace oaekit::stimulus {

using audio::SampleBuffer;

ClipSource directory_clips(const std::filesystem::path& dir) {
  return [dir](const std::string& clip) {
    const auto path = dir / clip;
    if (!std::filesystem::exists(path)) throw MissingInput("clip not found: " + path.string());
    return audio::load_wav(path);
  };
}

SampleBuffer assemble_task_audio(const TaskSpec& task, const ClipSource& clips, std::size_t length,
                                 int sample_rate) {
  if (task.task_id == 1 || task.source_clips.empty()) return SampleBuffer::zeros(length, sample_rate);
  std::vector<double> joined;
  for (std::size_t k = 0; k < task.source_clips.size(); ++k) {
    const std::size_t idx = task.clip_order.empty() ? k : static_cast<std::size_t>(task.clip_order[k]);
    const auto& name = task.source_clips[idx];
    const auto clip = clips(name);
    if (clip.sample_rate() != sample_rate) {
      throw InvalidArgument("clip " + name + " is at " + std::to_string(clip.sample_rate()) +
                            " Hz but the plan rate is " + std::to_string(sample_rate) +
                            " Hz (no resampling)");
    }
    joined.insert(joined.end(), clip.data().begin(), clip.data().end());
  }
  if (joined.empty()) throw InvalidArgument("task " + std::to_string(task.task_id) + ": clips are empty");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = joined[i % joined.size()];
  return SampleBuffer(std::move(out), sample_rate);
}

SessionBundle build_session(const SessionPlan& plan, const ClipSource& clips) {
  validate(plan);
  const std::size_t length = segment_samples(plan);

  // Resolve every task's audio before any embedding, so a missing clip
  // fails fast.
  std::map<int, SampleBuffer> task_audio;
  for (const auto& task : plan.tasks) {
    task_audio.emplace(task.task_id, assemble_task_audio(task, clips, length, plan.sample_rate));
  }

  SessionBundle bundle;
  Manifest& m = bundle.manifest;
  m.participant_id = plan.participant_id;
  m.sample_rate = plan.sample_rate;
  m.probe_amplitude = plan.stimulus_amplitude;
  m.notch_width_hz = plan.embed.notch_width;
  m.notch_transition_hz = plan.embed.transition;
  m.notch_order = plan.embed.notch_order;
  m.fade_ms = plan.embed.fade * 1000.0;
  m.segment_duration_s = plan.segment_duration;
  m.gap_s = plan.gap;
  m.repetitions = plan.repetitions;
  m.frequencies = plan.stimulus_frequencies;
  m.tasks = plan.tasks;
  m.segments = plan_segments(plan);

  std::map<std::pair<int, double>, EmbeddedPlayback> cache;
  for (auto& seg : m.segments) {
    const auto key = std::make_pair(seg.task_id, seg.f_s_hz);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, embed_stimulus(task_audio.at(seg.task_id), seg.f_s_hz,
                                             plan.stimulus_amplitude, plan.embed)).first;
    }
    seg.norm_gain_db = 20.0 * std::log10(it->second.norm_gain);
    bundle.playbacks.push_back(it->second);
  }
  return bundle;
}

void write_session(const SessionBundle& bundle, const std::filesystem::path& dir,
                   audio::WavEncoding encoding) {
  if (bundle.playbacks.size() != bundle.manifest.segments.size()) {
    throw InvalidArgument("session bundle has mismatched playbacks and segments");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < bundle.playbacks.size(); ++i) {
    audio::save_wav(bundle.playbacks[i].audio, dir / bundle.manifest.segments[i].file, encoding);
  }
  write_manifest(bundle.manifest, dir / "manifest.json");
}

SessionBundle read_session(const std::filesystem::path& dir) {
  SessionBundle bundle;
  bundle.manifest = read_manifest(dir / "manifest.json");
  const auto& m = bundle.manifest;
  for (const auto& seg : m.segments) {
    const auto path = dir / seg.file;
    if (!std::filesystem::exists(path)) throw MissingInput("playback file not found: " + path.string());
    EmbeddedPlayback p;
    p.audio = audio::load_wav(path);
    if (p.audio.sample_rate() != m.sample_rate) {
      throw SchemaViolation(path.string() + ": sample rate differs from the manifest");
    }
    if (p.audio.size() != seg.length()) {
      throw SchemaViolation(path.string() + ": length differs from the manifest segment");
    }
    p.notch_center = seg.f_s_hz;
    p.notch_width = m.notch_width_hz;
    p.probe_amplitude = m.probe_amplitude;
    p.norm_gain = std::pow(10.0, seg.norm_gain_db / 20.0);
    p.probe_fade = m.fade_ms / 1000.0;
    bundle.playbacks.push_back(std::move(p));
  }
  return bundle;
}

SampleBuffer continuous_playback(const SessionBundle& bundle) {
  const auto& m = bundle.manifest;
  std::vector<double> out(m.timeline_length(), 0.0);
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    const auto& seg = m.segments[i];
    const auto& audio = bundle.playbacks.at(i).audio;
    for (std::size_t n = 0; n < seg.length() && n < audio.size(); ++n) out[seg.start_sample + n] = audio[n];
  }
  return SampleBuffer(std::move(out), m.sample_rate);
}

}  // namespace oaekit::stimulus
