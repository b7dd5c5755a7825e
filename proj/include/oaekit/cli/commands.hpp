#pragma once

#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace oaekit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,         // usage or configuration error
  kExitMissing = 3,       // missing input file, clip, recording or baseline
  kExitSchema = 4,        // malformed input file
  kExitProcessing = 5,    // alignment, verification or other processing failure
};

int exit_code(const std::exception& e);

// Runs one command line (args exclude the program name). Results go to
// `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv);

// Output directories are written to a hidden sibling first and moved into
// place by commit(); without commit() nothing is left behind.
class StagedDir {
 public:
  explicit StagedDir(std::filesystem::path target);
  ~StagedDir();
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return stage_; }
  std::filesystem::path operator/(const std::string& name) const { return stage_ / name; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path stage_;
  bool committed_ = false;
};

}  // namespace oaekit::cli
