#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extrofit/eval.hpp"

namespace extrofit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct CommonArgs {
  bool lowercase = false;
  std::optional<std::filesystem::path> manifest;
};

struct ExtrofitArgs : CommonArgs {
  std::filesystem::path input, lexicon, output;
  std::size_t expand = 1;
  std::optional<std::size_t> components;
  double shrinkage = 1e-4;
  std::string weighting = "class-size";
  int precision = 6;
  bool full_precision = false;
};

struct RetrofitArgs : CommonArgs {
  std::filesystem::path input, lexicon, output;
  std::size_t iters = 10;
  double alpha = 1.0;
  std::string beta = "inverse-degree";
  int precision = 6;
  bool full_precision = false;
};

struct DatasetSpec {
  DatasetFormat format = DatasetFormat::Generic;
  std::vector<std::filesystem::path> paths;
};

struct EvalArgs : CommonArgs {
  std::filesystem::path vectors;
  std::vector<DatasetSpec> datasets;
  std::string format = "tsv";
};

struct NeighborsArgs : CommonArgs {
  std::filesystem::path vectors;
  std::string word;
  std::size_t top = 10;
};

// Parses `TAG=PATH[,PATH...]`; nullopt for an unknown tag or missing path.
std::optional<DatasetSpec> parse_dataset_spec(const std::string& text);

int cmd_extrofit(const ExtrofitArgs& args, std::ostream& out, std::ostream& err);
int cmd_retrofit(const RetrofitArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_neighbors(const NeighborsArgs& args, std::ostream& out, std::ostream& err);

// Full command line, argv[0] included. Machine-readable output goes to `out`;
// diagnostics and the run manifest go to `err`. Returns 0 on success, 1 on a
// runtime failure and 2 on flag misuse.
int run(std::span<const std::string> argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace extrofit::cli
