#include "dsaa/render.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dsaa {

namespace {

struct File {
  FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
    if (!f) throw std::runtime_error("render: cannot open " + path);
  }
  ~File() { std::fclose(f); }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

// palette for SVG output: hue steps around the wheel
std::string abstract_color(int i, int n) {
  const int hue = n > 0 ? (360 * i) / n : 0;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "hsl(%d,70%%,50%%)", hue);
  return buf;
}

}  // namespace

int abstract_gray(int i, int n) {
  if (n <= 1) return 160;
  return 40 + (i * 215) / (n - 1);
}

void write_pgm(const std::string& path, const Matrix& gray, int scale) {
  if (scale < 1) throw std::invalid_argument("write_pgm: scale must be >= 1");
  File file(path);
  std::fprintf(file.f, "P5\n%d %d\n255\n", gray.cols * scale, gray.rows * scale);
  std::vector<unsigned char> row(static_cast<size_t>(gray.cols) * scale);
  for (int r = 0; r < gray.rows; ++r) {
    for (int c = 0; c < gray.cols; ++c) {
      const double v = gray.at(r, c);
      const int g = v < 0 ? 0 : (v > 255 ? 255 : static_cast<int>(v + 0.5));
      for (int s = 0; s < scale; ++s)
        row[static_cast<size_t>(c) * scale + s] = static_cast<unsigned char>(g);
    }
    for (int s = 0; s < scale; ++s)
      if (std::fwrite(row.data(), 1, row.size(), file.f) != row.size())
        throw std::runtime_error("write_pgm: write failed");
  }
}

void render_abstraction_pgm(const std::string& path, const GridWorld& w,
                            const std::vector<int>& assignment, int n_abstract,
                            int scale) {
  if (assignment.size() != w.open_cells().size())
    throw std::invalid_argument("render_abstraction_pgm: assignment size mismatch");
  Matrix gray(w.rows(), w.cols());
  for (size_t i = 0; i < assignment.size(); ++i) {
    const auto [r, c] = w.open_cells()[i];
    gray.at(r, c) = abstract_gray(assignment[i], n_abstract);
  }
  write_pgm(path, gray, scale);
}

void render_abstraction_svg(const std::string& path, const GridWorld& w,
                            const std::vector<int>& assignment, int n_abstract,
                            int cell_px) {
  if (assignment.size() != w.open_cells().size())
    throw std::invalid_argument("render_abstraction_svg: assignment size mismatch");
  File file(path);
  std::fprintf(file.f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
               w.cols() * cell_px, w.rows() * cell_px);
  std::fprintf(file.f, "<rect width=\"100%%\" height=\"100%%\" fill=\"black\"/>\n");
  for (size_t i = 0; i < assignment.size(); ++i) {
    const auto [r, c] = w.open_cells()[i];
    std::fprintf(file.f,
                 "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"/>\n",
                 c * cell_px, r * cell_px, cell_px, cell_px,
                 abstract_color(assignment[i], n_abstract).c_str());
    std::fprintf(file.f,
                 "<text x=\"%d\" y=\"%d\" font-size=\"%d\" fill=\"black\">%d</text>\n",
                 c * cell_px + cell_px / 4, r * cell_px + (3 * cell_px) / 4,
                 cell_px / 2, assignment[i]);
  }
  std::fprintf(file.f, "</svg>\n");
}

void render_heatmap_pgm(const std::string& path, const GridWorld& w,
                        const Vec& values, int scale) {
  if (values.size() != w.open_cells().size())
    throw std::invalid_argument("render_heatmap_pgm: value count mismatch");
  double lo = values.empty() ? 0 : values[0], hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  Matrix gray(w.rows(), w.cols());
  for (size_t i = 0; i < values.size(); ++i) {
    const auto [r, c] = w.open_cells()[i];
    gray.at(r, c) = 1.0 + 254.0 * (values[i] - lo) / span;
  }
  write_pgm(path, gray, scale);
}

void render_slice_svg(const std::string& path, const Matrix& assignment,
                      int n_abstract, int cell_px) {
  File file(path);
  std::fprintf(file.f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
               assignment.cols * cell_px, assignment.rows * cell_px);
  for (int r = 0; r < assignment.rows; ++r)
    for (int c = 0; c < assignment.cols; ++c)
      std::fprintf(file.f,
                   "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"/>\n",
                   c * cell_px, r * cell_px, cell_px, cell_px,
                   abstract_color(static_cast<int>(assignment.at(r, c)), n_abstract)
                       .c_str());
  std::fprintf(file.f, "</svg>\n");
}

}  // namespace dsaa
