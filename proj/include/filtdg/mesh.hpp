#pragma once

// Quadtree meshes of axis-aligned rectangles over a rectangular domain.
//
// Leaves are addressed by (level, ix, iy) in the integer grid of their level
// and stored in depth-first (Morton within root, roots row-major) order.
// Faces are generated once per conforming pair and once per fine cell on a
// coarse/fine interface, so a coarse side against two fine neighbours owns
// two sub-faces.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace filtdg {

using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

struct Rect {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

struct MeshOptions {
  bool periodic_x = false;
  bool periodic_y = false;
  int max_level = 0;
};

struct CellKey {
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  bool operator==(const CellKey&) const = default;
  CellKey parent() const { return {level - 1, ix >> 1, iy >> 1}; }
  CellKey child(int c) const { return {level + 1, 2 * ix + (c & 1), 2 * iy + (c >> 1)}; }
  /// Index of this cell among its siblings (0..3, x bit low).
  int child_index() const { return static_cast<int>((ix & 1) + 2 * (iy & 1)); }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.level) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.ix) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.iy) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct Cell {
  CellKey key;
  Point center{};
  double dx = 0.0;
  double dy = 0.0;
  double diameter() const { return std::hypot(dx, dy); }
  double area() const { return dx * dy; }
};

enum class FaceKind { interior, boundary };

/// Cell sides, numbered x-, x+, y-, y+.
enum Side : int { x_minus = 0, x_plus = 1, y_minus = 2, y_plus = 3 };

/// A (sub-)face. `left` lies on the low side along `axis`, `right` on the
/// high side; `normal` always points from left to right (+e_axis). A boundary
/// face has exactly one of left/right equal to -1.
struct Face {
  FaceKind kind = FaceKind::interior;
  int axis = 0;
  int left = -1;
  int right = -1;
  /// -1 for conforming faces; otherwise 0/1 = half of the coarse cell's side
  /// covered by this sub-face (0 = lower tangential coordinate).
  int sub = -1;
  /// For sub-faces: which side is coarse (0 = left, 1 = right), else -1.
  int coarse_side = -1;
  Vec2 normal{};
  double length = 0.0;
  /// Face end with the smaller tangential coordinate.
  Point origin{};

  bool hanging() const { return sub >= 0; }
  int owner() const { return left >= 0 ? left : right; }
  /// Outward unit normal as seen from `cell`.
  Vec2 normal_for(int cell) const {
    return cell == left ? normal : Vec2{-normal[0], -normal[1]};
  }
};

/// Face incidence of a cell: which face, and which of the cell's sides.
struct CellFaceRef {
  int face = -1;
  int side = 0;
};

class QuadMesh {
 public:
  static constexpr int max_supported_level = 20;

  /// nx x ny uniform level-0 cells.
  static QuadMesh build_uniform(int nx, int ny, const Rect& domain, MeshOptions opts = {}) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("build_uniform: nx and ny must be >= 1");
    if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min) ||
        !std::isfinite(domain.width()) || !std::isfinite(domain.height()))
      throw std::invalid_argument("build_uniform: invalid domain (degenerate rectangle)");
    if (opts.max_level < 0 || opts.max_level > max_supported_level)
      throw std::invalid_argument("build_uniform: max_level out of range");
    std::vector<CellKey> keys;
    keys.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) keys.push_back({0, i, j});
    return QuadMesh(nx, ny, domain, opts, std::move(keys));
  }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  const Rect& domain() const noexcept { return domain_; }
  const MeshOptions& options() const noexcept { return opts_; }
  int max_level() const noexcept { return opts_.max_level; }
  bool periodic() const noexcept { return opts_.periodic_x || opts_.periodic_y; }

  std::size_t n_cells() const noexcept { return cells_.size(); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  const std::vector<Face>& faces() const noexcept { return faces_; }

  std::span<const CellFaceRef> cell_faces(std::size_t c) const {
    return {cell_face_refs_.data() + cell_face_offsets_[c],
            cell_face_offsets_[c + 1] - cell_face_offsets_[c]};
  }

  /// Leaf index for `key`, or -1.
  int find(const CellKey& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
  }

  /// Leaf covering the cell `key` (the leaf itself or a coarser ancestor), or -1
  /// if the region is refined beyond `key.level`.
  int find_covering(CellKey key) const {
    while (key.level >= 0) {
      const int id = find(key);
      if (id >= 0) return id;
      if (key.level == 0) break;
      key = key.parent();
    }
    return -1;
  }

  int finest_level() const {
    int l = 0;
    for (const auto& c : cells_) l = std::max(l, c.key.level);
    return l;
  }

  /// Minimum cell diagonal over the leaves.
  double min_diameter() const {
    if (cells_.empty()) throw std::logic_error("min_diameter: empty mesh");
    double h = cells_.front().diameter();
    for (const auto& c : cells_) h = std::min(h, c.diameter());
    return h;
  }

  double total_area() const {
    double a = 0.0;
    for (const auto& c : cells_) a += c.area();
    return a;
  }

  /// Same-level neighbour key across `side`; false if it leaves a non-periodic
  /// domain.
  bool neighbor_key(const CellKey& key, int side, CellKey& out) const {
    const std::int64_t nxl = static_cast<std::int64_t>(nx_) << key.level;
    const std::int64_t nyl = static_cast<std::int64_t>(ny_) << key.level;
    out = key;
    switch (side) {
      case x_minus: out.ix -= 1; break;
      case x_plus: out.ix += 1; break;
      case y_minus: out.iy -= 1; break;
      default: out.iy += 1; break;
    }
    if (out.ix < 0 || out.ix >= nxl) {
      if (!opts_.periodic_x) return false;
      out.ix = (out.ix + nxl) % nxl;
    }
    if (out.iy < 0 || out.iy >= nyl) {
      if (!opts_.periodic_y) return false;
      out.iy = (out.iy + nyl) % nyl;
    }
    return true;
  }

  /// Replace each marked leaf by its four children, closing the mark set so
  /// that face neighbours differ by at most one level. Marks on leaves at
  /// max_level are ignored.
  QuadMesh refine(const std::set<int>& marks) const {
    std::unordered_set<CellKey, CellKeyHash> to_refine;
    std::vector<CellKey> work;
    for (int id : marks) {
      if (id < 0 || static_cast<std::size_t>(id) >= cells_.size())
        throw std::out_of_range("refine: mark is not a leaf index");
      const CellKey& k = cells_[id].key;
      if (k.level >= opts_.max_level) continue;
      if (to_refine.insert(k).second) work.push_back(k);
    }
    while (!work.empty()) {
      const CellKey k = work.back();
      work.pop_back();
      for (int side = 0; side < 4; ++side) {
        CellKey nk;
        if (!neighbor_key(k, side, nk)) continue;
        const int nb = find_covering(nk);
        if (nb < 0) continue;
        const CellKey& bk = cells_[nb].key;
        if (bk.level < k.level && to_refine.insert(bk).second) work.push_back(bk);
      }
    }
    if (to_refine.empty()) return *this;
    std::vector<CellKey> keys;
    keys.reserve(cells_.size() + 3 * to_refine.size());
    for (const auto& c : cells_) {
      if (to_refine.count(c.key)) {
        for (int ch = 0; ch < 4; ++ch) keys.push_back(c.key.child(ch));
      } else {
        keys.push_back(c.key);
      }
    }
    return QuadMesh(nx_, ny_, domain_, opts_, std::move(keys));
  }

  /// Merge sibling quadruples whose four members are all marked, unless the
  /// merge would put the parent next to a leaf two levels finer.
  QuadMesh coarsen(const std::set<int>& marks) const {
    std::unordered_map<CellKey, int, CellKeyHash> count;
    for (int id : marks) {
      if (id < 0 || static_cast<std::size_t>(id) >= cells_.size())
        throw std::out_of_range("coarsen: mark is not a leaf index");
      const CellKey& k = cells_[id].key;
      if (k.level == 0) continue;
      ++count[k.parent()];
    }
    std::unordered_set<CellKey, CellKeyHash> merge;
    for (const auto& [parent, n] : count) {
      if (n != 4) continue;
      bool ok = true;
      for (int ch = 0; ch < 4 && ok; ++ch) {
        const CellKey ck = parent.child(ch);
        if (find(ck) < 0) {
          ok = false;
          break;
        }
        for (int side = 0; side < 4 && ok; ++side) {
          CellKey nk;
          if (!neighbor_key(ck, side, nk)) continue;
          if (nk.level == ck.level && nk.parent() == parent) continue;  // sibling
          if (find_covering(nk) < 0) ok = false;  // neighbour finer than the child
        }
      }
      if (ok) merge.insert(parent);
    }
    if (merge.empty()) return *this;
    std::vector<CellKey> keys;
    keys.reserve(cells_.size());
    for (const auto& c : cells_) {
      if (c.key.level > 0 && merge.count(c.key.parent())) {
        if (c.key.child_index() == 0) keys.push_back(c.key.parent());
      } else {
        keys.push_back(c.key);
      }
    }
    return QuadMesh(nx_, ny_, domain_, opts_, std::move(keys));
  }

  /// Exhaustive check that every pair of face-adjacent leaves differs by at
  /// most one level.
  bool is_balanced() const {
    for (const auto& c : cells_) {
      for (int side = 0; side < 4; ++side) {
        CellKey nk;
        if (!neighbor_key(c.key, side, nk)) continue;
        const int nb = find_covering(nk);
        if (nb >= 0) {
          if (c.key.level - cells_[nb].key.level > 1) return false;
          continue;
        }
        // Region finer than c: the two children touching the shared edge
        // must be leaves.
        for (int t = 0; t < 2; ++t) {
          CellKey ch = nk.child(0);
          switch (side) {
            case x_minus: ch = nk.child(1 + 2 * t); break;
            case x_plus: ch = nk.child(0 + 2 * t); break;
            case y_minus: ch = nk.child(2 + t); break;
            default: ch = nk.child(t); break;
          }
          if (find(ch) < 0) return false;
        }
      }
    }
    return true;
  }

 private:
  QuadMesh(int nx, int ny, const Rect& domain, MeshOptions opts, std::vector<CellKey> keys)
      : nx_(nx), ny_(ny), domain_(domain), opts_(opts) {
    sort_depth_first(keys);
    cells_.reserve(keys.size());
    const double dx0 = domain_.width() / nx_;
    const double dy0 = domain_.height() / ny_;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const CellKey& k = keys[i];
      const double s = std::ldexp(1.0, -k.level);
      Cell c;
      c.key = k;
      c.dx = dx0 * s;
      c.dy = dy0 * s;
      c.center = {domain_.x_min + (static_cast<double>(k.ix) + 0.5) * c.dx,
                  domain_.y_min + (static_cast<double>(k.iy) + 0.5) * c.dy};
      cells_.push_back(c);
      index_.emplace(k, static_cast<int>(i));
    }
    build_faces();
  }

  void sort_depth_first(std::vector<CellKey>& keys) const {
    constexpr int depth = max_supported_level;
    auto order = [&](const CellKey& k) {
      const std::int64_t ax = k.ix << (depth - k.level);
      const std::int64_t ay = k.iy << (depth - k.level);
      const std::int64_t root = (ay >> depth) * nx_ + (ax >> depth);
      std::uint64_t morton = 0;
      for (int b = 0; b < depth; ++b) {
        morton |= static_cast<std::uint64_t>((ax >> b) & 1) << (2 * b);
        morton |= static_cast<std::uint64_t>((ay >> b) & 1) << (2 * b + 1);
      }
      return std::pair<std::int64_t, std::uint64_t>(root, morton);
    };
    std::sort(keys.begin(), keys.end(),
              [&](const CellKey& a, const CellKey& b) { return order(a) < order(b); });
  }

  void build_faces() {
    std::vector<std::vector<CellFaceRef>> refs(cells_.size());
    auto add = [&](Face f) {
      const int id = static_cast<int>(faces_.size());
      if (f.left >= 0) refs[f.left].push_back({id, 2 * f.axis + 1});
      if (f.right >= 0) refs[f.right].push_back({id, 2 * f.axis});
      faces_.push_back(f);
    };
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
      const Cell& c = cells_[ci];
      const int id = static_cast<int>(ci);
      for (int side = 0; side < 4; ++side) {
        const int axis = side / 2;
        const bool plus = side % 2 == 1;
        Face f;
        f.axis = axis;
        f.normal = axis == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        f.length = axis == 0 ? c.dy : c.dx;
        const double off = plus ? 0.5 : -0.5;
        f.origin = axis == 0 ? Point{c.center[0] + off * c.dx, c.center[1] - 0.5 * c.dy}
                             : Point{c.center[0] - 0.5 * c.dx, c.center[1] + off * c.dy};
        CellKey nk;
        if (!neighbor_key(c.key, side, nk)) {
          f.kind = FaceKind::boundary;
          (plus ? f.left : f.right) = id;
          add(f);
          continue;
        }
        const int same = find(nk);
        if (same >= 0) {
          if (!plus) continue;
          f.left = id;
          f.right = same;
          add(f);
          continue;
        }
        if (nk.level > 0) {
          const int coarse = find(nk.parent());
          if (coarse >= 0) {
            f.sub = static_cast<int>(axis == 0 ? (c.key.iy & 1) : (c.key.ix & 1));
            if (plus) {
              f.left = id;
              f.right = coarse;
              f.coarse_side = 1;
            } else {
              f.left = coarse;
              f.right = id;
              f.coarse_side = 0;
            }
            add(f);
            continue;
          }
        }
        // Finer neighbours create the sub-faces from their side.
        if (find_covering(nk) >= 0)
          throw std::logic_error("QuadMesh: 2:1 balance violated");
      }
    }
    cell_face_offsets_.assign(cells_.size() + 1, 0);
    for (std::size_t c = 0; c < cells_.size(); ++c)
      cell_face_offsets_[c + 1] = cell_face_offsets_[c] + refs[c].size();
    cell_face_refs_.reserve(cell_face_offsets_.back());
    for (auto& r : refs) {
      std::sort(r.begin(), r.end(), [](const CellFaceRef& a, const CellFaceRef& b) {
        return a.side != b.side ? a.side < b.side : a.face < b.face;
      });
      cell_face_refs_.insert(cell_face_refs_.end(), r.begin(), r.end());
    }
  }

  int nx_ = 0;
  int ny_ = 0;
  Rect domain_{};
  MeshOptions opts_{};
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::unordered_map<CellKey, int, CellKeyHash> index_;
  std::vector<std::size_t> cell_face_offsets_;
  std::vector<CellFaceRef> cell_face_refs_;
};

}  // namespace filtdg
