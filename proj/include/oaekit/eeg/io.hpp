#pragma once

#include <filesystem>
#include <string>

#include "oaekit/eeg/recording.hpp"

namespace oaekit::eeg {

inline constexpr int kMarkersSchemaVersion = 1;
inline constexpr const char* kMarkersFile = "markers.json";

// markers.json: {"schema_version": 1, "sample_rate": R, "markers": [{"sample": n, "label": "2:start"}, ...]}
struct MarkerFile {
  int sample_rate = 0;
  std::vector<Marker> markers;
};

std::string markers_to_json(const MarkerFile& file);
MarkerFile markers_from_json(const std::string& text, const std::string& source);

// CSV with a sample_index column followed by one column per channel (uV).
// sample_index must count 0, 1, 2, ...
EegRecording parse_eeg_csv(const std::string& text, const std::string& source, const MarkerFile& markers);
EegRecording read_eeg(const std::filesystem::path& csv, const std::filesystem::path& markers);

std::string format_eeg_csv(const EegRecording& rec);
void write_eeg(const EegRecording& rec, const std::filesystem::path& csv, const std::filesystem::path& markers);

}  // namespace oaekit::eeg
