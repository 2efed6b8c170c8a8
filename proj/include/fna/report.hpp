#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fna {

// decimal, 17 significant digits
std::string g17(double v);

// CSV schema: header row, comma separators, LF endings, UTF-8.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_strings(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
};

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct PlotOptions {
    std::string title, xlabel, ylabel;
    bool logx = false;
    bool logy = false;
};

// Self-contained SVG line plot (no external assets).
void svg_line_plot(const std::string& path, const PlotOptions& opt,
                   const std::vector<Series>& series);

// Heatmap of values[i][j] over (xs[j], ys[i]); non-finite cells are black.
void svg_heatmap(const std::string& path, const PlotOptions& opt, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::vector<std::vector<double>>& values,
                 bool log_color);

// Per-run record: parameters, seed, precision, outputs, timestamps. Replaying
// the recorded parameters reproduces the CSV outputs byte for byte.
class Manifest {
  public:
    explicit Manifest(const std::string& subcommand);
    template <typename T>
    void param(const std::string& key, const T& value) {
        j_["parameters"][key] = value;
    }
    void output(const std::string& filename) { j_["outputs"].push_back(filename); }
    void write(const std::string& dir);

  private:
    nlohmann::json j_;
};

} // namespace fna
