// Copyright 2026 The Prodstage Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "prodstage/edges.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace prodstage {

namespace {

int Reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

Plane<double> GaussianBlur(const Plane<float>& src, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;
  const int w = src.width();
  const int h = src.height();
  Plane<double> tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * src(Reflect(x + i, w), y);
      }
      tmp(x, y) = acc;
    }
  }
  Plane<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp(x, Reflect(y + i, h));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

EdgeMap CannyEdges(const Plane<float>& gray, const CannyOptions& options) {
  const int w = gray.width();
  const int h = gray.height();
  const Plane<double> s = GaussianBlur(gray, options.sigma);
  auto at = [&](int x, int y) {
    return s(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  Plane<double> gx(w, h);
  Plane<double> gy(w, h);
  Plane<double> mag(w, h);
  double lo_mag = 0.0;
  double hi_mag = 0.0;
  bool first = true;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const double dy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      gx(x, y) = dx;
      gy(x, y) = dy;
      const double m = std::hypot(dx, dy);
      mag(x, y) = m;
      if (first) {
        lo_mag = hi_mag = m;
        first = false;
      }
      lo_mag = std::min(lo_mag, m);
      hi_mag = std::max(hi_mag, m);
    }
  }
  EdgeMap edges(w, h, 0.0);
  // Below this the image is flat up to rounding noise.
  if (hi_mag - lo_mag <= 1e-9) return edges;

  auto mag_at = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return mag(x, y);
  };
  // Non-maximum suppression along the quantized gradient direction.
  Plane<double> thin(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag(x, y);
      if (m <= 0.0) continue;
      double angle = std::atan2(gy(x, y), gx(x, y)) * 180.0 / 3.14159265358979323846;
      if (angle < 0) angle += 180.0;
      int ox = 0;
      int oy = 0;
      if (angle < 22.5 || angle >= 157.5) {
        ox = 1;
      } else if (angle < 67.5) {
        ox = 1;
        oy = 1;
      } else if (angle < 112.5) {
        oy = 1;
      } else {
        ox = -1;
        oy = 1;
      }
      if (m >= mag_at(x + ox, y + oy) && m >= mag_at(x - ox, y - oy)) {
        thin(x, y) = m;
      }
    }
  }

  const double low = lo_mag + options.low * (hi_mag - lo_mag);
  const double high = lo_mag + options.high * (hi_mag - lo_mag);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thin(x, y) >= high && edges(x, y) == 0.0) {
        edges(x, y) = 1.0;
        stack.emplace_back(x, y);
      }
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int ny = cy - 1; ny <= cy + 1; ++ny) {
          for (int nx = cx - 1; nx <= cx + 1; ++nx) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (edges(nx, ny) == 0.0 && thin(nx, ny) >= low) {
              edges(nx, ny) = 1.0;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
    }
  }
  return edges;
}

EdgeMap ExtractEdges(const Image& img, const CannyOptions& options) {
  return CannyEdges(ToGray(img), options);
}

}  // namespace prodstage
