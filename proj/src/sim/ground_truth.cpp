#include "oaekit/sim/ground_truth.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "oaekit/error.hpp"
#include "oaekit/json_util.hpp"

namespace oaekit::sim {

using json_util::Json;

std::string ground_truth_to_json(const GroundTruth& t) {
  Json j;
  j["schema_version"] = kGroundTruthSchemaVersion;
  j["participant_id"] = t.participant_id;
  Json model;
  Json gains = Json::object();
  for (const auto& [task, g] : t.model.oae_gain_per_load) gains[std::to_string(task)] = g;
  model["oae_gain_per_load"] = std::move(gains);
  Json sens = Json::array();
  for (const auto& [f, w] : t.model.frequency_sensitivity) sens.push_back({{"f_s_hz", f}, {"weight", w}});
  model["frequency_sensitivity"] = std::move(sens);
  model["oae_phase_rad"] = t.model.oae_phase;
  model["oae_latency_ms"] = t.model.oae_latency_ms;
  model["passive_reflectance"] = t.model.passive_reflectance;
  if (t.model.noise_floor_dbfs == kNoNoise) {
    model["noise_floor_dbfs"] = nullptr;
  } else {
    model["noise_floor_dbfs"] = t.model.noise_floor_dbfs;
  }
  model["seed"] = t.model.seed;
  j["model"] = std::move(model);
  Json segs = Json::array();
  for (const auto& s : t.segments) {
    Json js;
    js["index"] = s.segment_index;
    js["task_id"] = s.task_id;
    js["f_s_hz"] = s.f_s_hz;
    js["oae_amplitude"] = s.oae_amplitude;
    js["oae_phase_rad"] = s.oae_phase_rad;
    js["expected_magnitude"] = s.expected_magnitude;
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return json_util::dump(j);
}

GroundTruth ground_truth_from_json(const std::string& text) {
  using namespace json_util;
  const Json j = parse(text, "ground truth");
  GroundTruth t;
  if (integer(j, "$", "schema_version") != kGroundTruthSchemaVersion) {
    throw SchemaViolation("$.schema_version: unsupported version");
  }
  t.participant_id = string(j, "$", "participant_id");
  const Json& m = field(j, "$", "model");
  const Json& gains = field(m, "$.model", "oae_gain_per_load");
  if (!gains.is_object()) throw SchemaViolation("$.model.oae_gain_per_load: expected an object");
  t.model.oae_gain_per_load.clear();
  for (const auto& [k, v] : gains.items()) {
    if (!v.is_number()) throw SchemaViolation("$.model.oae_gain_per_load." + k + ": expected a number");
    try {
      t.model.oae_gain_per_load[std::stoi(k)] = v.get<double>();
    } catch (const std::logic_error&) {
      throw SchemaViolation("$.model.oae_gain_per_load." + k + ": key is not a task id");
    }
  }
  const Json& sens = array(m, "$.model", "frequency_sensitivity");
  for (std::size_t i = 0; i < sens.size(); ++i) {
    const auto p = child("$.model.frequency_sensitivity", i);
    t.model.frequency_sensitivity[number(sens[i], p, "f_s_hz")] = number(sens[i], p, "weight");
  }
  t.model.oae_phase = number(m, "$.model", "oae_phase_rad");
  t.model.oae_latency_ms = number(m, "$.model", "oae_latency_ms");
  t.model.passive_reflectance = number(m, "$.model", "passive_reflectance");
  const Json& noise = field(m, "$.model", "noise_floor_dbfs");
  t.model.noise_floor_dbfs = noise.is_null() ? kNoNoise : number(m, "$.model", "noise_floor_dbfs");
  const Json& seed = field(m, "$.model", "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw SchemaViolation("$.model.seed: expected an integer");
  t.model.seed = seed.get<std::uint64_t>();
  const Json& segs = array(j, "$", "segments");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto p = child("$.segments", i);
    OaeTruth s;
    s.segment_index = static_cast<int>(integer(segs[i], p, "index"));
    s.task_id = static_cast<int>(integer(segs[i], p, "task_id"));
    s.f_s_hz = number(segs[i], p, "f_s_hz");
    s.oae_amplitude = number(segs[i], p, "oae_amplitude");
    s.oae_phase_rad = number(segs[i], p, "oae_phase_rad");
    s.expected_magnitude = number(segs[i], p, "expected_magnitude");
    t.segments.push_back(s);
  }
  return t;
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << ground_truth_to_json(truth);
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("ground truth not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ground_truth_from_json(ss.str());
  } catch (const SchemaViolation& e) {
    throw SchemaViolation(path.string() + ": " + e.what());
  }
}

std::vector<ExpectedSed> expected_seds(const GroundTruth& truth) {
  std::map<std::pair<double, int>, std::pair<double, int>> mean;
  for (const auto& s : truth.segments) {
    auto& acc = mean[{s.f_s_hz, s.task_id}];
    acc.first += s.expected_magnitude;
    acc.second += 1;
  }
  std::vector<ExpectedSed> out;
  for (const auto& [key, acc] : mean) {
    if (key.second == 1) continue;
    const auto base = mean.find({key.first, 1});
    if (base == mean.end()) continue;
    const double mt = acc.first / acc.second;
    const double m1 = base->second.first / base->second.second;
    out.push_back({key.second, key.first, std::abs(mt * mt - m1 * m1)});
  }
  return out;
}

}  // namespace oaekit::sim
