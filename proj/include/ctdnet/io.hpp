#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ctdnet/answer_net.hpp"
#include "ctdnet/harness.hpp"

namespace ctdnet {

/// Shortest-safe text form: 17 significant digits, round-trips exactly.
std::string format_double(double v);

/// Write `content` to `path` via a temporary file in the same directory and a
/// rename. Creates parent directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// window_index,t_end,mean_rmse,se_rmse,runs
std::string curve_csv(const LearningCurve& curve);
/// run,window_index,rmse
std::string per_run_csv(const LearningCurve& curve);
/// depth,window_index,t_end,mean_rmse,se_rmse,runs
std::string sweep_csv(const std::vector<std::pair<std::size_t, LearningCurve>>& curves);
/// system,samples,floor,se
std::string noise_floor_csv(std::string_view system, std::size_t samples, const NoiseFloor& nf);

/// gnuplot script plotting mean RMSE (with standard-error bars) from the
/// given CSV files, one line per file.
std::string gnuplot_script(std::string_view title,
                           const std::vector<std::pair<std::string, std::string>>& files_and_labels,
                           std::string_view output_png);

/// Row-major weight snapshot: a "# ctdnet-weights rows=R cols=C" header, then
/// one comma-separated line per row.
void write_weights(std::ostream& os, const WeightMatrix& w);
WeightMatrix read_weights(std::istream& is);

struct Checkpoint {
  WeightMatrix weights;
  PredictionVector y_prev;
  std::int64_t t = 0;
};

/// "# ctdnet-checkpoint t=T rows=R cols=C", a line with y_prev, then the
/// weight rows. Eligibility traces are not saved.
void write_checkpoint(std::ostream& os, const Checkpoint& cp);
Checkpoint read_checkpoint(std::istream& is);

}  // namespace ctdnet
