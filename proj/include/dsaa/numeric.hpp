// Dense linear algebra kernels shared by all networks. Row-major, double
// precision, no external BLAS.
#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace dsaa {

using Vec = std::vector<double>;

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  void resize(int r, int c) {
    rows = r;
    cols = c;
    data.assign(static_cast<size_t>(r) * c, 0.0);
  }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  size_t size() const { return data.size(); }

  double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// y = x * w^T + b with x: batch x in, w: out x in, b: out. y is resized.
void linear_forward(const Matrix& x, const Matrix& w, const Vec& b, Matrix& y);

// Given dy = dL/dy: writes dx = dy * w, accumulates dw += dy^T * x and
// db += column sums of dy. dx is resized; dw/db must already be shaped.
void linear_backward(const Matrix& x, const Matrix& w, const Matrix& dy,
                     Matrix& dx, Matrix& dw, Vec& db);

double logsumexp(const double* q, int n);
void softmax_inplace(double* p, int n);
int argmax_lowest_tie(const double* v, int n);

bool all_finite(const Vec& v);
bool all_finite(const Matrix& m);

}  // namespace dsaa
