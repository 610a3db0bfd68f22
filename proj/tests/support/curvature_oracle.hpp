#pragma once

// Finite-difference curvature for diagonal metrics given as plain functions.
// Shares no code with the symbolic engine.

#include <array>
#include <functional>

namespace oracle {

using Coords = std::array<double, 4>;  // t, r, theta, phi
using DiagonalMetric = std::function<Coords(const Coords&)>;

struct Curvature {
  double riemann_up[4][4][4][4];  // R^a_{bcd}
  double ricci[4][4];
  double scalar;
};

inline Coords shifted(Coords x, int i, double h) {
  x[i] += h;
  return x;
}

// Gamma^a_{bc}, metric derivatives by central differences with step h.
inline void christoffel(const DiagonalMetric& g, const Coords& x, double h, double out[4][4][4]) {
  double dg[4][4];  // dg[k][a] = d_k g_aa
  for (int k = 0; k < 4; ++k) {
    const Coords plus = g(shifted(x, k, h));
    const Coords minus = g(shifted(x, k, -h));
    for (int a = 0; a < 4; ++a) dg[k][a] = (plus[a] - minus[a]) / (2.0 * h);
  }
  const Coords g0 = g(x);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        if (a == c) s += dg[b][a];
        if (a == b) s += dg[c][a];
        if (b == c) s -= dg[a][b];
        out[a][b][c] = 0.5 * s / g0[a];
      }
    }
  }
}

inline Curvature curvature(const DiagonalMetric& g, const Coords& x, double h = 1e-5) {
  Curvature out{};
  double gamma[4][4][4];
  christoffel(g, x, h, gamma);
  double dgamma[4][4][4][4];  // [k][a][b][c] = d_k Gamma^a_bc
  const double hk = 1e-4;     // outer step for the second derivative
  for (int k = 0; k < 4; ++k) {
    double plus[4][4][4];
    double minus[4][4][4];
    christoffel(g, shifted(x, k, hk), h, plus);
    christoffel(g, shifted(x, k, -hk), h, minus);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) dgamma[k][a][b][c] = (plus[a][b][c] - minus[a][b][c]) / (2.0 * hk);
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          double v = dgamma[c][a][b][d] - dgamma[d][a][b][c];
          for (int e = 0; e < 4; ++e) v += gamma[a][c][e] * gamma[e][b][d] - gamma[a][d][e] * gamma[e][b][c];
          out.riemann_up[a][b][c][d] = v;
        }
      }
    }
  }
  const Coords g0 = g(x);
  out.scalar = 0.0;
  for (int b = 0; b < 4; ++b) {
    for (int d = 0; d < 4; ++d) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += out.riemann_up[a][b][a][d];
      out.ricci[b][d] = v;
    }
    out.scalar += out.ricci[b][b] / g0[b];
  }
  return out;
}

}  // namespace oracle
