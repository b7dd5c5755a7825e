#include "oaekit/eeg/recording.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "oaekit/error.hpp"

namespace oaekit::eeg {

void validate(const EegRecording& rec) {
  if (rec.sample_rate <= 0) throw InvalidArgument("eeg: sample rate must be positive");
  if (rec.channel_names.size() != rec.channels()) {
    throw InvalidArgument("eeg: " + std::to_string(rec.channel_names.size()) + " channel names for " +
                          std::to_string(rec.channels()) + " channels");
  }
  for (std::size_t i = 0; i < rec.markers.size(); ++i) {
    if (rec.markers[i].sample > rec.samples()) {
      throw InvalidArgument("eeg: marker " + std::to_string(i) + " lies past the end of the recording");
    }
    if (i > 0 && rec.markers[i].sample < rec.markers[i - 1].sample) {
      throw InvalidArgument("eeg: markers are not sorted");
    }
  }
}

std::string start_label(int task_id) { return std::to_string(task_id) + ":start"; }
std::string end_label(int task_id) { return std::to_string(task_id) + ":end"; }

std::vector<Marker> markers_for(const std::vector<EegSegment>& segments) {
  std::vector<Marker> out;
  for (const auto& s : segments) {
    out.push_back({s.begin, start_label(s.task_id)});
    out.push_back({s.end, end_label(s.task_id)});
  }
  return out;
}

namespace {

struct ParsedLabel {
  int task_id;
  bool start;
};

ParsedLabel parse_label(const Marker& m, std::size_t i) {
  const auto fail = [&](const std::string& why) {
    return SchemaViolation("markers[" + std::to_string(i) + "] (\"" + m.label + "\"): " + why);
  };
  const auto colon = m.label.find(':');
  if (colon == std::string::npos) throw fail("expected \"<task>:start\" or \"<task>:end\"");
  const auto task = m.label.substr(0, colon);
  const auto kind = m.label.substr(colon + 1);
  if (task.size() != 1 || task[0] < '1' || task[0] > '4') throw fail("task must be 1-4");
  if (kind != "start" && kind != "end") throw fail("expected start or end");
  return {task[0] - '0', kind == "start"};
}

}  // namespace

std::vector<EegSegment> segments_from_markers(const std::vector<Marker>& markers) {
  std::vector<EegSegment> out;
  bool open = false;
  EegSegment cur;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const auto label = parse_label(markers[i], i);
    if (label.start) {
      if (open) {
        throw SchemaViolation("markers[" + std::to_string(i) + "]: segment starts before segment " +
                              std::to_string(cur.index) + " ends");
      }
      cur = {out.size(), label.task_id, markers[i].sample, 0};
      open = true;
    } else {
      if (!open) throw SchemaViolation("markers[" + std::to_string(i) + "]: end without start");
      if (label.task_id != cur.task_id) {
        throw SchemaViolation("markers[" + std::to_string(i) + "]: end of task " + std::to_string(label.task_id) +
                              " closes a task " + std::to_string(cur.task_id) + " segment");
      }
      if (markers[i].sample <= cur.begin) {
        throw SchemaViolation("markers[" + std::to_string(i) + "]: empty segment");
      }
      cur.end = markers[i].sample;
      out.push_back(cur);
      open = false;
    }
  }
  if (open) throw SchemaViolation("markers: segment " + std::to_string(cur.index) + " is never closed");
  if (out.empty()) throw SchemaViolation("markers: no segments");
  return out;
}

std::vector<EegSegment> segments_from_manifest(const stimulus::Manifest& manifest, int eeg_rate) {
  if (eeg_rate <= 0) throw InvalidArgument("eeg: sample rate must be positive");
  const double scale = static_cast<double>(eeg_rate) / manifest.sample_rate;
  std::vector<EegSegment> out;
  for (const auto& s : manifest.segments) {
    out.push_back({out.size(), s.task_id, static_cast<std::size_t>(std::llround(s.start_sample * scale)),
                   static_cast<std::size_t>(std::llround(s.end_sample * scale))});
  }
  return out;
}

void check_against_manifest(const std::vector<EegSegment>& segments, const stimulus::Manifest& manifest) {
  if (segments.size() != manifest.segments.size()) {
    throw SchemaViolation("markers define " + std::to_string(segments.size()) + " segments, manifest has " +
                          std::to_string(manifest.segments.size()));
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].task_id != manifest.segments[i].task_id) {
      throw SchemaViolation("markers: segment " + std::to_string(i) + " is task " +
                            std::to_string(segments[i].task_id) + ", manifest segment is task " +
                            std::to_string(manifest.segments[i].task_id));
    }
  }
}

bool is_frontal(const std::string& channel_name) {
  std::string n;
  for (char c : channel_name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n.rfind("fp", 0) == 0 || n.rfind("af", 0) == 0) return true;
  return n.size() >= 2 && n[0] == 'f' && (std::isdigit(static_cast<unsigned char>(n[1])) || n[1] == 'z');
}

}  // namespace oaekit::eeg
