#include "oaekit/stimulus/session.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "oaekit/error.hpp"
#include "oaekit/stimulus/fixtures.hpp"

namespace oaekit::stimulus {

namespace {

std::string hz(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void validate(const TaskSpec& task) {
  const std::string where = "task " + std::to_string(task.task_id);
  if (task.task_id < 1 || task.task_id > 4) {
    throw InvalidArgument("task_id must be 1..4, got " + std::to_string(task.task_id));
  }
  if (task.task_id == 1) {
    if (!task.source_clips.empty()) {
      throw InvalidArgument(where + ": the baseline task plays the probe only and takes no clips");
    }
    return;
  }
  if (task.source_clips.empty()) throw InvalidArgument(where + ": needs at least one clip");
  if (task.prompt_text.empty()) throw InvalidArgument(where + ": prompt_text is empty");
  if (task.question_text.empty()) throw InvalidArgument(where + ": question_text is empty");
  if (!task.clip_order.empty()) {
    if (task.clip_order.size() != task.source_clips.size()) {
      throw InvalidArgument(where + ": clip_order must list every clip exactly once");
    }
    std::set<int> seen(task.clip_order.begin(), task.clip_order.end());
    if (seen.size() != task.clip_order.size() || *seen.begin() < 0 ||
        *seen.rbegin() >= static_cast<int>(task.source_clips.size())) {
      throw InvalidArgument(where + ": clip_order is not a permutation of the clip indices");
    }
  }
}

std::vector<TaskSpec> default_tasks() {
  const auto& clips = fixtures::clip_names();
  return {
      {1, {}, "", "", "", {}},
      {2, {clips[0]}, "Pay attention to the rising chirps.",
       "How many chirps rose in pitch?", "several", {}},
      {3, {clips[1]}, "Follow the digit beeps of the low voice.",
       "What were the last two digits?", "see fixture", {}},
      {4, {clips[2]}, "Follow only the high voice while both voices play.",
       "What were the last two digits of the high voice?", "see fixture", {}},
  };
}

void validate(const SessionPlan& plan) {
  if (plan.participant_id.empty()) throw InvalidArgument("participant_id is empty");
  if (plan.participant_id.find_first_of(",\"\n\r") != std::string::npos) {
    throw InvalidArgument("participant_id may not contain commas, quotes or newlines");
  }
  if (plan.sample_rate <= 0) throw InvalidArgument("sample_rate must be positive");
  if (plan.stimulus_frequencies.empty()) throw InvalidArgument("frequencies: empty set");
  const double nyquist = plan.sample_rate / 2.0;
  std::set<double> unique;
  for (double f : plan.stimulus_frequencies) {
    if (!(f > 0.0)) throw InvalidArgument("frequencies: " + hz(f) + " Hz is not positive");
    if (f >= nyquist) {
      throw InvalidArgument("frequencies: " + hz(f) + " Hz frequency exceeds Nyquist (" +
                            hz(nyquist) + " Hz)");
    }
    const double half = plan.embed.notch_width / 2.0 + plan.embed.transition;
    if (f - half <= 0.0 || f + half >= nyquist) {
      throw InvalidArgument("frequencies: " + hz(f) +
                            " Hz is too close to DC or Nyquist for the probe notch");
    }
    if (!unique.insert(f).second) {
      throw InvalidArgument("frequencies: duplicate " + hz(f) + " Hz");
    }
  }
  if (!(plan.stimulus_amplitude > 0.0) || plan.stimulus_amplitude > 1.0) {
    throw InvalidArgument("probe_amplitude must be in (0, 1]");
  }
  if (!(plan.segment_duration >= 0.5)) {
    throw InvalidArgument("segment_duration must be at least 0.5 s");
  }
  if (!(plan.gap >= 0.0)) throw InvalidArgument("gap must be non-negative");
  if (plan.repetitions < 1) throw InvalidArgument("repetitions must be at least 1");
  if (plan.tasks.empty()) throw InvalidArgument("tasks: empty task list");
  std::set<int> ids;
  for (const auto& t : plan.tasks) {
    validate(t);
    if (!ids.insert(t.task_id).second) {
      throw InvalidArgument("tasks: duplicate task_id " + std::to_string(t.task_id));
    }
  }
  if (!ids.contains(1)) throw InvalidArgument("tasks: the baseline task 1 is required");
}

std::size_t segment_samples(const SessionPlan& plan) {
  return static_cast<std::size_t>(std::lround(plan.segment_duration * plan.sample_rate));
}

namespace {

std::string frequency_label(double f) {
  char buf[64];
  if (f == std::floor(f)) {
    std::snprintf(buf, sizeof buf, "%.0f", f);
  } else {
    std::snprintf(buf, sizeof buf, "%.3f", f);
  }
  return buf;
}

}  // namespace

std::vector<Segment> plan_segments(const SessionPlan& plan) {
  const std::size_t length = segment_samples(plan);
  const auto gap = static_cast<std::size_t>(std::lround(plan.gap * plan.sample_rate));
  std::vector<Segment> out;
  std::size_t cursor = 0;
  for (const auto& task : plan.tasks) {
    for (double f : plan.stimulus_frequencies) {
      for (int rep = 0; rep < plan.repetitions; ++rep) {
        Segment s;
        s.index = static_cast<int>(out.size());
        s.task_id = task.task_id;
        s.f_s_hz = f;
        s.repetition = rep;
        char name[128];
        std::snprintf(name, sizeof name, "seg%02d_task%d_f%s", s.index, task.task_id,
                      frequency_label(f).c_str());
        s.file = std::string(name) + (plan.repetitions > 1 ? "_r" + std::to_string(rep) : "") + ".wav";
        s.start_sample = cursor;
        s.end_sample = cursor + length;
        cursor = s.end_sample + gap;
        out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace oaekit::stimulus
