// Deterministic renders: binary PGM (P5) and SVG. Walls are black; abstract
// states get a fixed palette indexed by state.
#pragma once

#include <string>
#include <vector>

#include "dsaa/grid_world.hpp"

namespace dsaa {

// gray level for abstract state i of n: 40 + i * 215 / (n-1), or 160 if n == 1
int abstract_gray(int i, int n);

void write_pgm(const std::string& path, const Matrix& gray, int scale = 1);

// assignment[i] = abstract state of open cell i.
void render_abstraction_pgm(const std::string& path, const GridWorld& w,
                            const std::vector<int>& assignment, int n_abstract,
                            int scale = 1);
void render_abstraction_svg(const std::string& path, const GridWorld& w,
                            const std::vector<int>& assignment, int n_abstract,
                            int cell_px = 16);

// values per open cell, min-max normalized to gray 1..255 (walls 0).
void render_heatmap_pgm(const std::string& path, const GridWorld& w,
                        const Vec& values, int scale = 1);

// 2D slice render for non-grid observation spaces: a grid of probes colored
// by abstract state (rows x cols assignments).
void render_slice_svg(const std::string& path, const Matrix& assignment,
                      int n_abstract, int cell_px = 6);

}  // namespace dsaa
