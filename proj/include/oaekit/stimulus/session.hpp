#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oaekit/audio/sample_buffer.hpp"
#include "oaekit/audio/wav.hpp"
#include "oaekit/stimulus/embed.hpp"

namespace oaekit::stimulus {

// One auditory task. Task 1 is the probe-only baseline and carries no clips;
// tasks 2-4 play their clips (in `clip_order`, an index permutation over
// `source_clips`, or natural order when empty) after a prompt and before a
// question.
struct TaskSpec {
  int task_id = 1;
  std::vector<std::string> source_clips;
  std::string prompt_text;
  std::string question_text;
  std::string expected_answer;
  std::vector<int> clip_order;
};

void validate(const TaskSpec& task);

// The four-task protocol with the bundled synthetic fixture clips.
std::vector<TaskSpec> default_tasks();

// One (task, probe frequency, repetition) playback window on the session
// timeline, in samples at the plan rate.
struct Segment {
  int index = 0;
  int task_id = 1;
  double f_s_hz = 0.0;
  int repetition = 0;
  std::string file;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
  double norm_gain_db = 0.0;

  [[nodiscard]] std::size_t length() const { return end_sample - start_sample; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SessionPlan {
  std::string participant_id = "P01";
  std::vector<double> stimulus_frequencies = {1000.0, 2000.0, 3000.0};
  double stimulus_amplitude = kDefaultProbeAmplitude;
  std::vector<TaskSpec> tasks = default_tasks();
  int sample_rate = audio::kDefaultSampleRate;
  double segment_duration = 10.0;  // s per (task, f_s)
  double gap = 1.0;                // s of silence between segments
  int repetitions = 1;
  EmbedOptions embed;
};

// Throws InvalidArgument naming the offending field.
void validate(const SessionPlan& plan);

// Task-major layout: for each task, for each frequency, for each repetition.
std::vector<Segment> plan_segments(const SessionPlan& plan);

std::size_t segment_samples(const SessionPlan& plan);

}  // namespace oaekit::stimulus
