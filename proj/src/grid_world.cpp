#include "dsaa/grid_world.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsaa {

GridWorld::GridWorld(const std::string& map_text, GridObs mode) : mode_(mode) {
  std::vector<std::string> lines;
  std::istringstream in(map_text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 3) throw std::invalid_argument("grid map: too small");
  rows_ = static_cast<int>(lines.size());
  cols_ = static_cast<int>(lines[0].size());
  walls_.assign(static_cast<size_t>(rows_) * cols_, 1);
  cell_index_.assign(static_cast<size_t>(rows_) * cols_, -1);
  int starts = 0;
  for (int r = 0; r < rows_; ++r) {
    if (static_cast<int>(lines[r].size()) != cols_)
      throw std::invalid_argument("grid map: not rectangular");
    for (int c = 0; c < cols_; ++c) {
      const char ch = lines[r][c];
      if (ch == '#') {
        continue;
      } else if (ch == '.' || ch == 'S') {
        walls_[static_cast<size_t>(r) * cols_ + c] = 0;
        cell_index_[static_cast<size_t>(r) * cols_ + c] =
            static_cast<int>(open_cells_.size());
        open_cells_.emplace_back(r, c);
        if (ch == 'S') {
          start_row_ = r;
          start_col_ = c;
          ++starts;
        }
      } else {
        throw std::invalid_argument(std::string("grid map: bad character '") + ch + "'");
      }
    }
  }
  if (open_cells_.empty()) throw std::invalid_argument("grid map: no open cells");
  if (starts > 1) throw std::invalid_argument("grid map: multiple start cells");
  if (starts == 0) {
    start_row_ = open_cells_[0].first;
    start_col_ = open_cells_[0].second;
  }
  for (int r = 0; r < rows_; ++r)
    if (!wall(r, 0) || !wall(r, cols_ - 1))
      throw std::invalid_argument("grid map: boundary not fully walled");
  for (int c = 0; c < cols_; ++c)
    if (!wall(0, c) || !wall(rows_ - 1, c))
      throw std::invalid_argument("grid map: boundary not fully walled");
  row_ = start_row_;
  col_ = start_col_;
}

GridWorld GridWorld::from_file(const std::string& path, GridObs mode) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("grid map: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return GridWorld(ss.str(), mode);
}

Vec GridWorld::reset() {
  row_ = start_row_;
  col_ = start_col_;
  return observe();
}

StepResult GridWorld::step(int action) {
  int r = row_, c = col_;
  switch (action) {
    case kUp: --r; break;
    case kDown: ++r; break;
    case kLeft: --c; break;
    case kRight: ++c; break;
    default: throw std::invalid_argument("grid step: bad action");
  }
  if (!wall(r, c)) {
    row_ = r;
    col_ = c;
  }
  return {observe(), 0.0, false};
}

int GridWorld::obs_dim() const {
  return mode_ == GridObs::kCoordsNormalized ? 2
                                             : static_cast<int>(open_cells_.size());
}

int GridWorld::cell_index(int r, int c) const {
  return cell_index_[static_cast<size_t>(r) * cols_ + c];
}

Vec GridWorld::observe() const { return observe_cell(row_, col_); }

Vec GridWorld::observe_cell(int r, int c) const {
  if (mode_ == GridObs::kCoordsNormalized) {
    return {static_cast<double>(r) / (rows_ - 1), static_cast<double>(c) / (cols_ - 1)};
  }
  Vec obs(open_cells_.size(), 0.0);
  const int idx = cell_index(r, c);
  if (idx < 0) throw std::invalid_argument("grid observe: cell is a wall");
  obs[idx] = 1.0;
  return obs;
}

void GridWorld::teleport(int r, int c) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_ || wall(r, c))
    throw std::invalid_argument("grid teleport: target is not an open cell");
  row_ = r;
  col_ = c;
}

std::unique_ptr<Env> GridWorld::clone() const {
  return std::make_unique<GridWorld>(*this);
}

const std::string& four_rooms_map() {
  static const std::string map =
      "#############\n"
      "#S....#.....#\n"
      "#.....#.....#\n"
      "#...........#\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "##.####.....#\n"
      "#.....###.###\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "#...........#\n"
      "#.....#.....#\n"
      "#############\n";
  return map;
}

const std::string& two_rooms_map() {
  static const std::string map =
      "###################\n"
      "#S.......#........#\n"
      "#........#........#\n"
      "#........#........#\n"
      "#.................#\n"
      "#........#........#\n"
      "#........#........#\n"
      "#........#........#\n"
      "#........#........#\n"
      "###################\n";
  return map;
}

}  // namespace dsaa
