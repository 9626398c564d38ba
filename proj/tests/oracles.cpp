/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace prid::oracles {

Stats mean_population_std(std::span<const double> values) {
  Stats out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  out.population_std = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

FitResult normal_equation_fit(std::span<const double> src_xy,
                              std::span<const double> dst_xy) {
  // Unknown z = (s, tx, ty). Residual rows per point:
  //   [x 1 0] z - u  and  [y 0 1] z - v
  double ata[3][3] = {{0}};
  double atb[3] = {0};
  const std::size_t n = src_xy.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    double x = src_xy[2 * i], y = src_xy[2 * i + 1];
    double u = dst_xy[2 * i], v = dst_xy[2 * i + 1];
    const double rows[2][3] = {{x, 1.0, 0.0}, {y, 0.0, 1.0}};
    const double rhs[2] = {u, v};
    for (int r = 0; r < 2; ++r) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) ata[a][b] += rows[r][a] * rows[r][b];
        atb[a] += rows[r][a] * rhs[r];
      }
    }
  }

  // Gaussian elimination with partial pivoting.
  double m[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = ata[r][c];
    m[r][3] = atb[r];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    if (m[col][col] == 0.0)
      throw std::runtime_error("oracle: singular normal equations");
    for (int r = col + 1; r < 3; ++r) {
      double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  double z[3];
  for (int r = 2; r >= 0; --r) {
    double acc = m[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * z[c];
    z[r] = acc / m[r][r];
  }
  return {z[0], z[1], z[2]};
}

double fit_residual(std::span<const double> src_xy,
                    std::span<const double> dst_xy, double scale, double tx,
                    double ty) {
  double rss = 0.0;
  const std::size_t n = src_xy.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    double rx = scale * src_xy[2 * i] + tx - dst_xy[2 * i];
    double ry = scale * src_xy[2 * i + 1] + ty - dst_xy[2 * i + 1];
    rss += rx * rx + ry * ry;
  }
  return rss;
}

FitResult grid_refine_fit(std::span<const double> src_xy,
                          std::span<const double> dst_xy, int rounds) {
  double center[3] = {1.0, 0.0, 0.0};
  double radius[3] = {4.0, 100.0, 100.0};
  const int steps = 8;
  for (int round = 0; round < rounds; ++round) {
    double best[3] = {center[0], center[1], center[2]};
    double best_rss =
        fit_residual(src_xy, dst_xy, center[0], center[1], center[2]);
    for (int a = -steps; a <= steps; ++a)
      for (int b = -steps; b <= steps; ++b)
        for (int c = -steps; c <= steps; ++c) {
          double cand[3] = {center[0] + radius[0] * a / steps,
                            center[1] + radius[1] * b / steps,
                            center[2] + radius[2] * c / steps};
          if (cand[0] <= 0.0) continue;
          double rss =
              fit_residual(src_xy, dst_xy, cand[0], cand[1], cand[2]);
          if (rss < best_rss) {
            best_rss = rss;
            std::copy(cand, cand + 3, best);
          }
        }
    std::copy(best, best + 3, center);
    for (double& r : radius) r *= 0.5;
  }
  return {center[0], center[1], center[2]};
}

double rect_overlap(double ax, double ay, double aw, double ah, double bx,
                    double by, double bw, double bh) {
  double left = std::max(ax, bx);
  double right = std::min(ax + aw, bx + bw);
  double top = std::max(ay, by);
  double bottom = std::min(ay + ah, by + bh);
  double w = right - left;
  double h = bottom - top;
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return (w * h) / (aw * ah);
}

namespace {

std::vector<int> ranked_candidates(std::span<const double> distances,
                                   const std::vector<bool>& excluded) {
  std::vector<int> order;
  for (std::size_t j = 0; j < distances.size(); ++j)
    if (!excluded[j]) order.push_back(static_cast<int>(j));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return distances[a] < distances[b]; });
  return order;
}

}  // namespace

int first_relevant_rank(std::span<const double> distances,
                        const std::vector<bool>& relevant,
                        const std::vector<bool>& excluded) {
  std::vector<int> order = ranked_candidates(distances, excluded);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    if (relevant[order[pos]]) return static_cast<int>(pos) + 1;
  return 0;
}

double average_precision(std::span<const double> distances,
                         const std::vector<bool>& relevant,
                         const std::vector<bool>& excluded) {
  std::vector<int> order = ranked_candidates(distances, excluded);
  int seen = 0;
  double sum = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (relevant[order[pos]]) {
      ++seen;
      sum += static_cast<double>(seen) / static_cast<double>(pos + 1);
    }
  }
  if (seen == 0) throw std::runtime_error("oracle: no relevant items");
  return sum / seen;
}

double central_difference(const std::function<double()>& loss,
                          double* parameter, double step) {
  const double saved = *parameter;
  *parameter = saved + step;
  double up = loss();
  *parameter = saved - step;
  double down = loss();
  *parameter = saved;
  return (up - down) / (2.0 * step);
}

std::vector<double> fill_rule_interpreter(std::span<const double> image,
                                          std::span<const std::uint8_t> valid,
                                          int width, int height, int ch) {
  std::vector<double> out(image.begin(), image.end());
  auto pixel = [&](int x, int y, int c) -> double {
    return image[(static_cast<std::size_t>(y) * width + x) * ch + c];
  };
  auto is_valid = [&](int x, int y) -> bool {
    return valid[static_cast<std::size_t>(y) * width + x] != 0;
  };

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (is_valid(x, y)) continue;
      for (int c = 0; c < ch; ++c) {
        double value = 0.0;
        int mirror_x = width - 1 - x;
        if (is_valid(mirror_x, y)) {
          value = pixel(mirror_x, y, c);
        } else {
          double row_sum = 0.0;
          int row_n = 0;
          for (int xx = 0; xx < width; ++xx)
            if (is_valid(xx, y)) {
              row_sum += pixel(xx, y, c);
              ++row_n;
            }
          if (row_n > 0) {
            value = row_sum / row_n;
          } else {
            double all_sum = 0.0;
            int all_n = 0;
            for (int yy = 0; yy < height; ++yy)
              for (int xx = 0; xx < width; ++xx)
                if (is_valid(xx, yy)) {
                  all_sum += pixel(xx, yy, c);
                  ++all_n;
                }
            value = all_n > 0 ? all_sum / all_n : 0.0;
          }
        }
        out[(static_cast<std::size_t>(y) * width + x) * ch + c] = value;
      }
    }
  }
  return out;
}

}  // namespace prid::oracles
