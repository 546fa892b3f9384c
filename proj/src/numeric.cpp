#include "dsaa/numeric.hpp"

#include <cmath>

namespace dsaa {

void linear_forward(const Matrix& x, const Matrix& w, const Vec& b, Matrix& y) {
  const int batch = x.rows;
  const int in = x.cols;
  const int out = w.rows;
  if (y.rows != batch || y.cols != out) y.resize(batch, out);
  for (int r = 0; r < batch; ++r) {
    const double* xr = x.row(r);
    double* yr = y.row(r);
    int o = 0;
    // 4-way output blocking: one pass over xr feeds four weight rows
    for (; o + 4 <= out; o += 4) {
      const double* w0 = w.row(o);
      const double* w1 = w0 + in;
      const double* w2 = w1 + in;
      const double* w3 = w2 + in;
      double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
      for (int i = 0; i < in; ++i) {
        const double xi = xr[i];
        s0 += xi * w0[i];
        s1 += xi * w1[i];
        s2 += xi * w2[i];
        s3 += xi * w3[i];
      }
      yr[o] = s0 + b[o];
      yr[o + 1] = s1 + b[o + 1];
      yr[o + 2] = s2 + b[o + 2];
      yr[o + 3] = s3 + b[o + 3];
    }
    for (; o < out; ++o) {
      const double* wr = w.row(o);
      double s = 0;
      for (int i = 0; i < in; ++i) s += xr[i] * wr[i];
      yr[o] = s + b[o];
    }
  }
}

void linear_backward(const Matrix& x, const Matrix& w, const Matrix& dy,
                     Matrix& dx, Matrix& dw, Vec& db) {
  const int batch = x.rows;
  const int in = x.cols;
  const int out = w.rows;
  if (dx.rows != batch || dx.cols != in) dx.resize(batch, in);

  // dx = dy * w
  for (int r = 0; r < batch; ++r) {
    double* dxr = dx.row(r);
    const double* dyr = dy.row(r);
    for (int i = 0; i < in; ++i) dxr[i] = 0.0;
    int o = 0;
    for (; o + 4 <= out; o += 4) {
      const double* w0 = w.row(o);
      const double* w1 = w0 + in;
      const double* w2 = w1 + in;
      const double* w3 = w2 + in;
      const double g0 = dyr[o], g1 = dyr[o + 1], g2 = dyr[o + 2], g3 = dyr[o + 3];
      for (int i = 0; i < in; ++i)
        dxr[i] += g0 * w0[i] + g1 * w1[i] + g2 * w2[i] + g3 * w3[i];
    }
    for (; o < out; ++o) {
      const double g = dyr[o];
      const double* wr = w.row(o);
      for (int i = 0; i < in; ++i) dxr[i] += g * wr[i];
    }
  }

  // dw += dy^T * x, db += column sums of dy
  int r = 0;
  for (; r + 4 <= batch; r += 4) {
    const double* x0 = x.row(r);
    const double* x1 = x0 + in;
    const double* x2 = x1 + in;
    const double* x3 = x2 + in;
    const double* dy0 = dy.row(r);
    const double* dy1 = dy0 + out;
    const double* dy2 = dy1 + out;
    const double* dy3 = dy2 + out;
    for (int o = 0; o < out; ++o) {
      const double g0 = dy0[o], g1 = dy1[o], g2 = dy2[o], g3 = dy3[o];
      double* dwr = dw.row(o);
      for (int i = 0; i < in; ++i)
        dwr[i] += g0 * x0[i] + g1 * x1[i] + g2 * x2[i] + g3 * x3[i];
      db[o] += g0 + g1 + g2 + g3;
    }
  }
  for (; r < batch; ++r) {
    const double* xr = x.row(r);
    const double* dyr = dy.row(r);
    for (int o = 0; o < out; ++o) {
      const double g = dyr[o];
      double* dwr = dw.row(o);
      for (int i = 0; i < in; ++i) dwr[i] += g * xr[i];
      db[o] += g;
    }
  }
}

double logsumexp(const double* q, int n) {
  double m = q[0];
  for (int i = 1; i < n; ++i) m = std::max(m, q[i]);
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::exp(q[i] - m);
  return m + std::log(s);
}

void softmax_inplace(double* p, int n) {
  double m = p[0];
  for (int i = 1; i < n; ++i) m = std::max(m, p[i]);
  double s = 0;
  for (int i = 0; i < n; ++i) {
    p[i] = std::exp(p[i] - m);
    s += p[i];
  }
  const double inv = 1.0 / s;
  for (int i = 0; i < n; ++i) p[i] *= inv;
}

int argmax_lowest_tie(const double* v, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const Matrix& m) { return all_finite(m.data); }

}  // namespace dsaa
