#include "oaekit/eeg/io.hpp"

#include <sstream>

#include "oaekit/csv.hpp"
#include "oaekit/error.hpp"
#include "oaekit/json_util.hpp"

namespace oaekit::eeg {

std::string markers_to_json(const MarkerFile& file) {
  json_util::Json j;
  j["schema_version"] = kMarkersSchemaVersion;
  j["sample_rate"] = file.sample_rate;
  j["markers"] = json_util::Json::array();
  for (const auto& m : file.markers) j["markers"].push_back({{"sample", m.sample}, {"label", m.label}});
  return json_util::dump(j);
}

MarkerFile markers_from_json(const std::string& text, const std::string& source) {
  try {
    const auto j = json_util::parse(text, source);
    if (json_util::integer(j, "$", "schema_version") != kMarkersSchemaVersion) {
      throw SchemaViolation("$.schema_version: expected " + std::to_string(kMarkersSchemaVersion));
    }
    MarkerFile out;
    out.sample_rate = static_cast<int>(json_util::integer(j, "$", "sample_rate"));
    if (out.sample_rate <= 0) throw SchemaViolation("$.sample_rate: must be positive");
    const auto& list = json_util::array(j, "$", "markers");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto path = "$.markers[" + std::to_string(i) + "]";
      out.markers.push_back({json_util::count(list[i], path, "sample"), json_util::string(list[i], path, "label")});
      if (i > 0 && out.markers[i].sample < out.markers[i - 1].sample) {
        throw SchemaViolation(path + ".sample: markers must be sorted");
      }
    }
    return out;
  } catch (const SchemaViolation& e) {
    const std::string what = e.what();
    if (what.rfind(source, 0) == 0) throw;
    throw SchemaViolation(source + ": " + what);
  }
}

EegRecording parse_eeg_csv(const std::string& text, const std::string& source, const MarkerFile& markers) {
  const auto table = csv::parse(text, source);
  if (table.header.empty() || table.header[0] != "sample_index") {
    throw SchemaViolation(source + ": line 1: first column must be sample_index");
  }
  if (table.rows.empty()) throw SchemaViolation(source + ": no samples");
  EegRecording rec;
  rec.sample_rate = markers.sample_rate;
  rec.channel_names.assign(table.header.begin() + 1, table.header.end());
  for (std::size_t c = 0; c < rec.channel_names.size(); ++c) {
    for (std::size_t d = 0; d < c; ++d) {
      if (rec.channel_names[c] == rec.channel_names[d]) {
        throw SchemaViolation(source + ": line 1: duplicate channel \"" + rec.channel_names[c] + "\"");
      }
    }
  }
  const auto channels = static_cast<Eigen::Index>(rec.channel_names.size());
  rec.data.resize(channels, static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.integer(r, 0) != static_cast<long long>(r)) {
      throw SchemaViolation(source + ": line " + std::to_string(table.line_of(r)) + ": sample_index must be " +
                            std::to_string(r));
    }
    for (Eigen::Index c = 0; c < channels; ++c) {
      rec.data(c, static_cast<Eigen::Index>(r)) = table.number(r, static_cast<std::size_t>(c) + 1);
    }
  }
  rec.markers = markers.markers;
  for (std::size_t i = 0; i < rec.markers.size(); ++i) {
    if (rec.markers[i].sample > rec.samples()) {
      throw SchemaViolation("markers[" + std::to_string(i) + "]: sample " + std::to_string(rec.markers[i].sample) +
                            " is past the end of " + source + " (" + std::to_string(rec.samples()) + " samples)");
    }
  }
  return rec;
}

EegRecording read_eeg(const std::filesystem::path& csv_path, const std::filesystem::path& markers_path) {
  const auto markers = markers_from_json(csv::read_text(markers_path), markers_path.string());
  return parse_eeg_csv(csv::read_text(csv_path), csv_path.string(), markers);
}

std::string format_eeg_csv(const EegRecording& rec) {
  validate(rec);
  std::ostringstream out;
  out << "sample_index";
  for (const auto& n : rec.channel_names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < rec.data.cols(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < rec.data.rows(); ++c) out << ',' << csv::format_number(rec.data(c, i));
    out << '\n';
  }
  return out.str();
}

void write_eeg(const EegRecording& rec, const std::filesystem::path& csv_path,
               const std::filesystem::path& markers_path) {
  csv::write_text(csv_path, format_eeg_csv(rec));
  csv::write_text(markers_path, markers_to_json({rec.sample_rate, rec.markers}));
}

}  // namespace oaekit::eeg
