#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oaekit/sim/simulate.hpp"

namespace oaekit::sim {

inline constexpr int kGroundTruthSchemaVersion = 1;

struct GroundTruth {
  std::string participant_id;
  EarModel model;
  std::vector<OaeTruth> segments;
};

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const std::string& text);
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth read_ground_truth(const std::filesystem::path& path);

// Closed-form |M_t^2 - M_1^2| per (task 2..4, f_s) from expected magnitudes,
// repetitions averaged like batch extraction does.
struct ExpectedSed {
  int task_id = 2;
  double f_s_hz = 0.0;
  double sed = 0.0;
};
std::vector<ExpectedSed> expected_seds(const GroundTruth& truth);

}  // namespace oaekit::sim
