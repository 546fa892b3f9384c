// Grid-room worlds loaded from ASCII maps: '#' wall, '.' open, 'S' start.
// Maps must be rectangular with a fully walled boundary.
#pragma once

#include <string>
#include <vector>

#include "dsaa/env.hpp"

namespace dsaa {

enum class GridObs { kCoordsNormalized, kOneHotCell };

enum GridAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

class GridWorld final : public Env {
 public:
  GridWorld(const std::string& map_text, GridObs mode = GridObs::kCoordsNormalized);

  static GridWorld from_file(const std::string& path,
                             GridObs mode = GridObs::kCoordsNormalized);

  Vec reset() override;
  StepResult step(int action) override;
  int obs_dim() const override;
  int n_actions() const override { return 4; }
  int state_id() const override { return cell_index(row_, col_); }
  int n_state_ids() const override { return static_cast<int>(open_cells_.size()); }
  std::unique_ptr<Env> clone() const override;
  std::string name() const override { return "grid"; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool wall(int r, int c) const { return walls_[static_cast<size_t>(r) * cols_ + c]; }
  int start_row() const { return start_row_; }
  int start_col() const { return start_col_; }
  int agent_row() const { return row_; }
  int agent_col() const { return col_; }

  // Index of an open cell in row-major open-cell order; -1 for walls.
  int cell_index(int r, int c) const;
  const std::vector<std::pair<int, int>>& open_cells() const { return open_cells_; }
  Vec observe() const;
  Vec observe_cell(int r, int c) const;

  // Moves the agent (used by oracles probing specific cells).
  void teleport(int r, int c);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<char> walls_;
  std::vector<int> cell_index_;  // rows*cols -> open index or -1
  std::vector<std::pair<int, int>> open_cells_;
  int start_row_ = 0, start_col_ = 0;
  int row_ = 0, col_ = 0;
  GridObs mode_;
};

// The two shipped maps.
const std::string& four_rooms_map();
const std::string& two_rooms_map();

}  // namespace dsaa
