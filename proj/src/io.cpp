#include "ctdnet/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ctdnet/error.hpp"

namespace ctdnet {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string curve_csv(const LearningCurve& curve) {
  std::string out = "window_index,t_end,mean_rmse,se_rmse,runs\n";
  for (std::size_t w = 0; w < curve.points(); ++w) {
    out += std::to_string(w) + ',' + std::to_string(curve.t_end[w]) + ',' +
           format_double(curve.mean[w]) + ',' + format_double(curve.se[w]) + ',' +
           std::to_string(curve.runs.size()) + '\n';
  }
  return out;
}

std::string per_run_csv(const LearningCurve& curve) {
  std::string out = "run,window_index,rmse\n";
  for (std::size_t r = 0; r < curve.runs.size(); ++r) {
    const auto& windows = curve.runs[r].windows;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      out += std::to_string(r) + ',' + std::to_string(w) + ',' + format_double(windows[w]) + '\n';
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<std::pair<std::size_t, LearningCurve>>& curves) {
  std::string out = "depth,window_index,t_end,mean_rmse,se_rmse,runs\n";
  for (const auto& [depth, curve] : curves) {
    for (std::size_t w = 0; w < curve.points(); ++w) {
      out += std::to_string(depth) + ',' + std::to_string(w) + ',' +
             std::to_string(curve.t_end[w]) + ',' + format_double(curve.mean[w]) + ',' +
             format_double(curve.se[w]) + ',' + std::to_string(curve.runs.size()) + '\n';
    }
  }
  return out;
}

std::string noise_floor_csv(std::string_view system, std::size_t samples, const NoiseFloor& nf) {
  return "system,samples,floor,se\n" + std::string(system) + ',' + std::to_string(samples) + ',' +
         format_double(nf.floor) + ',' + format_double(nf.standard_error) + '\n';
}

std::string gnuplot_script(std::string_view title,
                           const std::vector<std::pair<std::string, std::string>>& files_and_labels,
                           std::string_view output_png) {
  std::ostringstream os;
  os << "# gnuplot script; run from this directory: gnuplot plot.gp\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,500\n"
     << "set output '" << output_png << "'\n"
     << "set title '" << title << "'\n"
     << "set xlabel 'time step'\n"
     << "set ylabel 'RMSE of one-step feature predictions'\n"
     << "set key top right\n"
     << "plot ";
  for (std::size_t k = 0; k < files_and_labels.size(); ++k) {
    const auto& [file, label] = files_and_labels[k];
    if (k > 0) os << ", \\\n     ";
    os << "'" << file << "' every ::1 using 2:3:4 with yerrorlines title '" << label << "'";
  }
  os << "\n";
  return os.str();
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t expected) {
  std::vector<double> values;
  values.reserve(expected);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // strtod, unlike stod, accepts subnormals.
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || std::isspace(static_cast<unsigned char>(cell[0]))) {
      throw IoError("malformed number '" + cell + "'");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.size() != expected) {
    throw IoError("row has " + std::to_string(values.size()) + " values, expected " +
                  std::to_string(expected));
  }
  return values;
}

std::string join_row(std::span<const double> values) {
  std::string out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j > 0) out += ',';
    out += format_double(values[j]);
  }
  return out;
}

void write_rows(std::ostream& os, const WeightMatrix& w) {
  for (std::size_t i = 0; i < w.rows(); ++i) os << join_row(w.row(i)) << '\n';
}

WeightMatrix read_rows(std::istream& is, std::size_t rows, std::size_t cols) {
  WeightMatrix w(rows, cols);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw IoError("truncated weight matrix");
    const auto values = parse_row(line, cols);
    std::copy(values.begin(), values.end(), w.row(i).begin());
  }
  return w;
}

}  // namespace

void write_weights(std::ostream& os, const WeightMatrix& w) {
  os << "# ctdnet-weights rows=" << w.rows() << " cols=" << w.cols() << '\n';
  write_rows(os, w);
}

WeightMatrix read_weights(std::istream& is) {
  std::string header;
  std::getline(is, header);
  std::size_t rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# ctdnet-weights rows=%zu cols=%zu", &rows, &cols) != 2) {
    throw IoError("bad weight snapshot header: '" + header + "'");
  }
  return read_rows(is, rows, cols);
}

void write_checkpoint(std::ostream& os, const Checkpoint& cp) {
  if (cp.y_prev.size() != cp.weights.rows()) {
    throw std::invalid_argument("write_checkpoint: prediction length does not match weights");
  }
  os << "# ctdnet-checkpoint t=" << cp.t << " rows=" << cp.weights.rows()
     << " cols=" << cp.weights.cols() << '\n';
  os << join_row(cp.y_prev) << '\n';
  write_rows(os, cp.weights);
}

Checkpoint read_checkpoint(std::istream& is) {
  std::string header;
  std::getline(is, header);
  long long t = 0;
  std::size_t rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# ctdnet-checkpoint t=%lld rows=%zu cols=%zu", &t, &rows,
                  &cols) != 3) {
    throw IoError("bad checkpoint header: '" + header + "'");
  }
  Checkpoint cp;
  cp.t = t;
  std::string line;
  if (!std::getline(is, line)) throw IoError("truncated checkpoint");
  cp.y_prev = parse_row(line, rows);
  cp.weights = read_rows(is, rows, cols);
  return cp;
}

}  // namespace ctdnet
