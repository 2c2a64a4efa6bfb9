#pragma once
// Marching squares on a binary cell field.

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace dynamo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Polyline = std::vector<Point2>;

/// Interface between true and false samples of a field given on the nodes
/// (x_i, y_j) of a rectilinear grid, flag(i, j) indexed as i + nx * j.
/// Crossings are placed at edge midpoints; saddles are split so that the
/// true samples stay disconnected.  Segments are chained into polylines
/// (closed ones repeat their first vertex).
inline std::vector<Polyline> marching_squares(const std::vector<bool>& flag, int nx, int ny,
                                              const std::vector<double>& xs, const std::vector<double>& ys) {
  // Edge keys: horizontal edge (i,j)-(i+1,j) -> 2*(i + nx*j), vertical (i,j)-(i,j+1) -> 2*(i + nx*j) + 1.
  auto hkey = [nx](int i, int j) { return std::int64_t{2} * (i + static_cast<std::int64_t>(nx) * j); };
  auto vkey = [nx](int i, int j) { return std::int64_t{2} * (i + static_cast<std::int64_t>(nx) * j) + 1; };
  auto point_of = [&](std::int64_t key) {
    const std::int64_t cell = key / 2;
    const int i = static_cast<int>(cell % nx);
    const int j = static_cast<int>(cell / nx);
    if (key % 2 == 0) return Point2{0.5 * (xs[i] + xs[i + 1]), ys[j]};
    return Point2{xs[i], 0.5 * (ys[j] + ys[j + 1])};
  };
  auto at = [&](int i, int j) { return static_cast<bool>(flag[static_cast<std::size_t>(i + nx * j)]); };

  std::vector<std::pair<std::int64_t, std::int64_t>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const bool a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      const int code = (a ? 1 : 0) | (b ? 2 : 0) | (c ? 4 : 0) | (d ? 8 : 0);
      const std::int64_t bottom = hkey(i, j), top = hkey(i, j + 1), left = vkey(i, j), right = vkey(i + 1, j);
      switch (code) {
        case 0: case 15: break;
        case 1: case 14: segments.push_back({left, bottom}); break;
        case 2: case 13: segments.push_back({bottom, right}); break;
        case 3: case 12: segments.push_back({left, right}); break;
        case 4: case 11: segments.push_back({right, top}); break;
        case 6: case 9: segments.push_back({bottom, top}); break;
        case 7: case 8: segments.push_back({left, top}); break;
        case 5:
          segments.push_back({left, bottom});
          segments.push_back({right, top});
          break;
        case 10:
          segments.push_back({bottom, right});
          segments.push_back({left, top});
          break;
        default: break;
      }
    }
  }

  std::map<std::int64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  auto other_end = [&](std::size_t s, std::int64_t key) {
    return segments[s].first == key ? segments[s].second : segments[s].first;
  };
  auto next_unused = [&](std::int64_t key) -> long {
    for (std::size_t s : incident[key])
      if (!used[s]) return static_cast<long>(s);
    return -1;
  };

  std::vector<Polyline> out;
  auto walk = [&](std::size_t start, std::int64_t from) {
    std::vector<std::int64_t> keys{from};
    std::int64_t key = from;
    long s = static_cast<long>(start);
    while (s >= 0) {
      used[static_cast<std::size_t>(s)] = true;
      key = other_end(static_cast<std::size_t>(s), key);
      keys.push_back(key);
      s = next_unused(key);
    }
    Polyline line;
    for (auto k : keys) line.push_back(point_of(k));
    out.push_back(std::move(line));
  };
  // Open chains first (start at an endpoint of degree one), then loops.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (auto end : {segments[s].first, segments[s].second}) {
      if (incident[end].size() == 1) {
        walk(s, end);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(s, segments[s].first);
  return out;
}

}  // namespace dynamo
