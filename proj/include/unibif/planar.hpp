#pragma once

/**
 * @file planar.hpp
 * @brief Pixel topology: complement decomposition, fillings, separating
 *        paths to a rectangle's right edge, and separating chords of a disk.
 *
 * Occupied cells are 8-connected, free cells 4-connected.  The raster is
 * surrounded by a virtual free frame, so every free cell touching the border
 * belongs to the single unbounded complement component.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "unibif/symbolic.hpp"

namespace unibif {

struct Cell {
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

class PixelMask {
public:
    PixelMask() = default;
    PixelMask(int width, int height) : width_(width), height_(height) {
        if (width < 1 || height < 1) throw std::invalid_argument("mask needs positive dimensions");
        occ_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    }

    /// One row per line, '#' occupied, '.' free.  Blank trailing lines are
    /// ignored; all rows must have the same width.
    static PixelMask parse(std::string_view text) {
        std::vector<std::string> rows;
        std::size_t pos = 0;
        std::size_t offset = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string line(text.substr(pos, end - pos));
            if (!line.empty() && line.back() == '\r') line.pop_back();
            for (std::size_t i = 0; i < line.size(); ++i)
                if (line[i] != '#' && line[i] != '.')
                    throw ParseError(std::string("unexpected character '") + line[i] + "' in mask",
                                     offset + i);
            rows.push_back(std::move(line));
            offset += end - pos + 1;
            pos = end + 1;
        }
        while (!rows.empty() && rows.back().empty()) rows.pop_back();
        if (rows.empty()) throw ParseError("empty mask", 0);
        const std::size_t w = rows.front().size();
        if (w == 0) throw ParseError("empty mask row", 0);
        PixelMask m(static_cast<int>(w), static_cast<int>(rows.size()));
        offset = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != w) throw ParseError("ragged mask row " + std::to_string(r), offset);
            for (std::size_t c = 0; c < w; ++c)
                if (rows[r][c] == '#') m.set({static_cast<int>(r), static_cast<int>(c)});
            offset += rows[r].size() + 1;
        }
        return m;
    }

    std::string str() const {
        std::string s;
        s.reserve(static_cast<std::size_t>((width_ + 1) * height_));
        for (int r = 0; r < height_; ++r) {
            for (int c = 0; c < width_; ++c) s.push_back(occupied({r, c}) ? '#' : '.');
            s.push_back('\n');
        }
        return s;
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool inside(Cell p) const noexcept { return p.row >= 0 && p.col >= 0 && p.row < height_ && p.col < width_; }
    bool occupied(Cell p) const noexcept { return inside(p) && occ_[index(p)]; }
    void set(Cell p, bool value = true) {
        if (!inside(p)) throw std::out_of_range("cell outside mask");
        occ_[index(p)] = value ? 1 : 0;
    }
    std::size_t index(Cell p) const noexcept {
        return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.col);
    }
    Cell cell_at(std::size_t i) const noexcept {
        return {static_cast<int>(i / static_cast<std::size_t>(width_)), static_cast<int>(i % static_cast<std::size_t>(width_))};
    }
    std::size_t size() const noexcept { return occ_.size(); }
    bool on_frame(Cell p) const noexcept {
        return p.row == 0 || p.col == 0 || p.row == height_ - 1 || p.col == width_ - 1;
    }

    friend bool operator==(const PixelMask&, const PixelMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> occ_;
};

inline constexpr Cell kNeighbors4[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
inline constexpr Cell kNeighbors8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

inline Cell operator+(Cell a, Cell b) noexcept { return {a.row + b.row, a.col + b.col}; }

/// 8-connected occupied components; ids in row-major order of first cell.
struct MaskLabels {
    std::vector<int> id;  // per cell, -1 when free
    std::vector<std::vector<Cell>> components;
};

inline MaskLabels label_mask(const PixelMask& mask) {
    MaskLabels out;
    out.id.assign(mask.size(), -1);
    std::vector<Cell> stack;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Cell s = mask.cell_at(i);
        if (!mask.occupied(s) || out.id[i] >= 0) continue;
        const int k = static_cast<int>(out.components.size());
        out.components.emplace_back();
        out.id[i] = k;
        stack.push_back(s);
        while (!stack.empty()) {
            const Cell p = stack.back();
            stack.pop_back();
            out.components[static_cast<std::size_t>(k)].push_back(p);
            for (Cell d : kNeighbors8) {
                const Cell q = p + d;
                if (mask.occupied(q) && out.id[mask.index(q)] < 0) {
                    out.id[mask.index(q)] = k;
                    stack.push_back(q);
                }
            }
        }
        std::sort(out.components[static_cast<std::size_t>(k)].begin(), out.components[static_cast<std::size_t>(k)].end());
    }
    return out;
}

struct ComplementComponent {
    std::vector<Cell> cells;  // sorted
    bool bounded = false;
    friend bool operator==(const ComplementComponent&, const ComplementComponent&) = default;
};

/// The unbounded component comes first (possibly empty when the mask covers
/// the whole frame), followed by the bounded ones in row-major order.
inline std::vector<ComplementComponent> complement_components(const PixelMask& mask) {
    std::vector<int> seen(mask.size(), 0);
    std::vector<ComplementComponent> out(1);
    out[0].bounded = false;
    auto flood = [&](std::deque<Cell> queue, std::vector<Cell>& cells) {
        while (!queue.empty()) {
            const Cell p = queue.front();
            queue.pop_front();
            cells.push_back(p);
            for (Cell d : kNeighbors4) {
                const Cell q = p + d;
                if (mask.inside(q) && !mask.occupied(q) && !seen[mask.index(q)]) {
                    seen[mask.index(q)] = 1;
                    queue.push_back(q);
                }
            }
        }
    };
    std::deque<Cell> frame;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Cell p = mask.cell_at(i);
        if (mask.on_frame(p) && !mask.occupied(p)) {
            seen[i] = 1;
            frame.push_back(p);
        }
    }
    flood(std::move(frame), out[0].cells);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Cell p = mask.cell_at(i);
        if (mask.occupied(p) || seen[i]) continue;
        seen[i] = 1;
        ComplementComponent c;
        c.bounded = true;
        flood(std::deque<Cell>{p}, c.cells);
        out.push_back(std::move(c));
    }
    for (auto& c : out) std::sort(c.cells.begin(), c.cells.end());
    return out;
}

/// Fill(W): W together with everything it encloses, i.e. the complement of
/// the unbounded 4-component of (plane - W).  Other mask cells count as free.
inline std::vector<Cell> fill(const PixelMask& mask, const std::vector<Cell>& component) {
    if (component.empty()) return {};
    int r0 = component.front().row, r1 = r0, c0 = component.front().col, c1 = c0;
    for (Cell p : component) {
        if (!mask.occupied(p)) throw std::invalid_argument("fill: component cell is not occupied");
        r0 = std::min(r0, p.row);
        r1 = std::max(r1, p.row);
        c0 = std::min(c0, p.col);
        c1 = std::max(c1, p.col);
    }
    // work in the bounding box padded by one free ring
    const int h = r1 - r0 + 3, w = c1 - c0 + 3;
    std::vector<std::uint8_t> state(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0);  // 1 = W, 2 = outside
    auto at = [&](int r, int c) -> std::uint8_t& {
        return state[static_cast<std::size_t>(r) * static_cast<std::size_t>(w) + static_cast<std::size_t>(c)];
    };
    for (Cell p : component) at(p.row - r0 + 1, p.col - c0 + 1) = 1;
    std::deque<std::pair<int, int>> q{{0, 0}};
    at(0, 0) = 2;
    while (!q.empty()) {
        auto [r, c] = q.front();
        q.pop_front();
        for (Cell d : kNeighbors4) {
            const int rr = r + d.row, cc = c + d.col;
            if (rr < 0 || cc < 0 || rr >= h || cc >= w || at(rr, cc) != 0) continue;
            at(rr, cc) = 2;
            q.emplace_back(rr, cc);
        }
    }
    std::vector<Cell> out;
    for (int r = 1; r < h - 1; ++r)
        for (int c = 1; c < w - 1; ++c)
            if (at(r, c) != 2) out.push_back({r - 1 + r0, c - 1 + c0});
    return out;
}

struct PathResult {
    std::vector<Cell> cells;
    Cell first;   // endpoint on the smaller-row side of the contact
    Cell second;  // endpoint on the larger-row side
    friend bool operator==(const PathResult&, const PathResult&) = default;
};

class NoPath : public std::runtime_error {
public:
    explicit NoPath(std::vector<int> blockers)
        : std::runtime_error(message(blockers)), blockers_(std::move(blockers)) {}
    const std::vector<int>& blockers() const noexcept { return blockers_; }

private:
    static std::string message(const std::vector<int>& ids) {
        std::string s = "no separating path; blocking components:";
        for (int i : ids) s += " " + std::to_string(i);
        return s;
    }
    std::vector<int> blockers_;
};

enum class SearchMode { Direct, Doubled };

namespace detail {

// BFS over cells with passable[i] != 0 on a w x h grid; empty when unreachable.
inline std::vector<Cell> bfs_path(int w, int h, const std::vector<std::uint8_t>& passable, Cell from, Cell to,
                                  std::vector<std::uint8_t>* reached = nullptr) {
    auto idx = [&](Cell p) { return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(w) + static_cast<std::size_t>(p.col); };
    auto ok = [&](Cell p) { return p.row >= 0 && p.col >= 0 && p.row < h && p.col < w && passable[idx(p)]; };
    std::vector<std::int64_t> prev(passable.size(), -2);
    if (!ok(from) || !ok(to)) return {};
    std::deque<Cell> q{from};
    prev[idx(from)] = -1;
    while (!q.empty()) {
        const Cell p = q.front();
        q.pop_front();
        if (p == to) break;
        for (Cell d : kNeighbors4) {
            const Cell n = p + d;
            if (ok(n) && prev[idx(n)] == -2) {
                prev[idx(n)] = static_cast<std::int64_t>(idx(p));
                q.push_back(n);
            }
        }
    }
    if (reached) {
        reached->assign(passable.size(), 0);
        for (std::size_t i = 0; i < prev.size(); ++i) (*reached)[i] = prev[i] != -2;
    }
    if (prev[idx(to)] == -2) return {};
    std::vector<Cell> path;
    for (std::int64_t i = static_cast<std::int64_t>(idx(to)); i >= 0; i = prev[static_cast<std::size_t>(i)])
        path.push_back({static_cast<int>(i / w), static_cast<int>(i % w)});
    std::reverse(path.begin(), path.end());
    return path;
}

// Drops revisits so that every cell appears once.
inline std::vector<Cell> erase_loops(const std::vector<Cell>& path) {
    std::vector<Cell> out;
    std::set<Cell> on;
    for (Cell p : path) {
        if (on.count(p)) {
            while (out.back() != p) {
                on.erase(out.back());
                out.pop_back();
            }
            continue;
        }
        out.push_back(p);
        on.insert(p);
    }
    return out;
}

// Mask components 4-adjacent to both reached regions (the wall between them),
// or to the first region when no common neighbour exists.
inline std::vector<int> blocking_ids(const PixelMask& mask, const MaskLabels& labels,
                                     const std::vector<std::uint8_t>& fromA,
                                     const std::vector<std::uint8_t>& fromB) {
    auto touching = [&](const std::vector<std::uint8_t>& reached) {
        std::set<int> ids;
        for (std::size_t i = 0; i < reached.size(); ++i) {
            if (!reached[i]) continue;
            const Cell p = mask.cell_at(i);
            for (Cell d : kNeighbors4) {
                const Cell q = p + d;
                if (mask.occupied(q)) ids.insert(labels.id[mask.index(q)]);
            }
        }
        return ids;
    };
    const auto a = touching(fromA);
    const auto b = touching(fromB);
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    if (both.empty()) both.assign(a.begin(), a.end());
    return both;
}

}  // namespace detail

/// Maximal contiguous runs [r0, r1] of the component's cells in the last column.
inline std::vector<std::pair<int, int>> right_edge_runs(const PixelMask& mask, const std::vector<Cell>& component) {
    std::vector<int> rows;
    for (Cell p : component)
        if (p.col == mask.width() - 1) rows.push_back(p.row);
    std::sort(rows.begin(), rows.end());
    std::vector<std::pair<int, int>> runs;
    for (int r : rows) {
        if (!runs.empty() && runs.back().second + 1 == r) runs.back().second = r;
        else runs.emplace_back(r, r);
    }
    return runs;
}

/// Path in the complement from the free edge cell just before the contact
/// run of `component` (containing p0) to the one just after it.
inline PathResult separating_path(const PixelMask& mask, int component, Cell p0,
                                  SearchMode mode = SearchMode::Direct) {
    const MaskLabels labels = label_mask(mask);
    if (component < 0 || component >= static_cast<int>(labels.components.size()))
        throw std::out_of_range("unknown component id " + std::to_string(component));
    if (p0.col != mask.width() - 1 || !mask.occupied(p0) || labels.id[mask.index(p0)] != component)
        throw std::invalid_argument("p0 must be a right-edge cell of the component");
    const auto& comp = labels.components[static_cast<std::size_t>(component)];
    std::pair<int, int> run{-1, -1};
    for (auto r : right_edge_runs(mask, comp))
        if (r.first <= p0.row && p0.row <= r.second) run = r;
    const Cell ya{run.first - 1, mask.width() - 1};
    const Cell yb{run.second + 1, mask.width() - 1};
    if (!mask.inside(ya) || !mask.inside(yb))
        throw std::invalid_argument("contact run reaches a corner of the rectangle");

    const int W = mask.width(), H = mask.height();
    if (mode == SearchMode::Direct) {
        std::vector<std::uint8_t> passable(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) passable[i] = !mask.occupied(mask.cell_at(i));
        std::vector<std::uint8_t> ra, rb;
        auto path = detail::bfs_path(W, H, passable, ya, yb, &ra);
        if (path.empty()) {
            detail::bfs_path(W, H, passable, yb, ya, &rb);
            throw NoPath(detail::blocking_ids(mask, labels, ra, rb));
        }
        return {std::move(path), ya, yb};
    }

    // reflect across the right edge: column c and 2W-1-c are mirror images
    PixelMask twice(2 * W, H);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Cell p = mask.cell_at(i);
        if (!mask.occupied(p)) continue;
        twice.set(p);
        twice.set({p.row, 2 * W - 1 - p.col});
    }
    std::vector<std::uint8_t> passable(twice.size());
    for (std::size_t i = 0; i < twice.size(); ++i) passable[i] = !twice.occupied(twice.cell_at(i));
    // every filling not containing an endpoint is contracted to an obstacle
    for (const auto& c : label_mask(twice).components) {
        const auto filled = fill(twice, c);
        const bool holdsEndpoint = std::binary_search(filled.begin(), filled.end(), ya) ||
                                   std::binary_search(filled.begin(), filled.end(), yb);
        if (holdsEndpoint) continue;
        for (Cell p : filled) passable[twice.index(p)] = 0;
    }
    auto path = detail::bfs_path(2 * W, H, passable, ya, yb);
    if (path.empty()) {
        std::vector<std::uint8_t> direct(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) direct[i] = !mask.occupied(mask.cell_at(i));
        std::vector<std::uint8_t> ra, rb;
        detail::bfs_path(W, H, direct, ya, yb, &ra);
        detail::bfs_path(W, H, direct, yb, ya, &rb);
        throw NoPath(detail::blocking_ids(mask, labels, ra, rb));
    }
    std::vector<Cell> folded;
    for (Cell p : path) {
        const Cell f{p.row, p.col < W ? p.col : 2 * W - 1 - p.col};
        if (folded.empty() || folded.back() != f) folded.push_back(f);
    }
    return {detail::erase_loops(folded), ya, yb};
}

/// Disk of radius R centred in a (2R+1) x (2R+1) raster.
struct DiskGeometry {
    int radius = 0;

    int size() const noexcept { return 2 * radius + 1; }
    bool contains(Cell p) const noexcept {
        const double dr = p.row - radius, dc = p.col - radius;
        return dr * dr + dc * dc <= (radius + 0.5) * (radius + 0.5);
    }
    bool on_boundary(Cell p) const noexcept {
        if (!contains(p)) return false;
        for (Cell d : kNeighbors4)
            if (!contains(p + d)) return true;
        return false;
    }
    double angle(Cell p) const noexcept {
        const double a = std::atan2(static_cast<double>(radius - p.row), static_cast<double>(p.col - radius));
        return a < 0 ? a + 2 * std::numbers::pi : a;
    }
    /// Boundary cells in counter-clockwise order starting from angle 0.
    std::vector<Cell> ring() const {
        std::vector<Cell> out;
        for (int r = 0; r < size(); ++r)
            for (int c = 0; c < size(); ++c)
                if (on_boundary({r, c})) out.push_back({r, c});
        std::sort(out.begin(), out.end(), [&](Cell a, Cell b) {
            const double x = angle(a), y = angle(b);
            if (x != y) return x < y;
            return a < b;
        });
        return out;
    }
    /// Rectangle coordinates of a cell: t = r/R (t = 1 on the circle) and
    /// x = M (theta - pi) / pi in [-M, M].
    std::pair<double, double> to_rectangle(Cell p, double M) const noexcept {
        const double dr = p.row - radius, dc = p.col - radius;
        const double t = std::min(1.0, std::sqrt(dr * dr + dc * dc) / (radius + 0.5));
        return {t, M * (angle(p) - std::numbers::pi) / std::numbers::pi};
    }
};

struct ChordResult {
    PathResult path;
    std::vector<std::pair<double, double>> rectangle;  // (t, x) per path cell
    bool interior = true;  // false when the path had to use boundary cells
};

/// Chord of the disk from the boundary cell just before C's contact arc to
/// the one just after it, avoiding the mask.  Interior cells are preferred.
inline ChordResult separating_chord(const PixelMask& diskMask, int component, Cell contact, double M = 1.0) {
    if (diskMask.width() != diskMask.height() || diskMask.width() % 2 == 0)
        throw std::invalid_argument("disk mask must be square with odd side");
    const DiskGeometry disk{diskMask.width() / 2};
    const MaskLabels labels = label_mask(diskMask);
    if (component < 0 || component >= static_cast<int>(labels.components.size()))
        throw std::out_of_range("unknown component id " + std::to_string(component));
    for (std::size_t i = 0; i < diskMask.size(); ++i)
        if (diskMask.occupied(diskMask.cell_at(i)) && !disk.contains(diskMask.cell_at(i)))
            throw std::invalid_argument("mask extends outside the disk");
    if (!disk.on_boundary(contact) || !diskMask.occupied(contact) || labels.id[diskMask.index(contact)] != component)
        throw std::invalid_argument("contact must be a boundary cell of the component");

    const auto ring = disk.ring();
    const std::size_t n = ring.size();
    auto inC = [&](std::size_t k) {
        const Cell p = ring[k % n];
        return diskMask.occupied(p) && labels.id[diskMask.index(p)] == component;
    };
    std::size_t at = 0;
    while (ring[at] != contact) ++at;
    std::size_t lo = at, hi = at, span = 1;
    while (span < n && inC(lo + n - 1)) {
        lo = (lo + n - 1) % n;
        ++span;
    }
    while (span < n && inC(hi + 1)) {
        hi = (hi + 1) % n;
        ++span;
    }
    if (span >= n) throw std::invalid_argument("component covers the whole boundary");
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (inC(k) && !inC(k + n - 1)) ++count;
    if (count != 1) throw std::invalid_argument("component meets the boundary more than once");
    const Cell ya = ring[(lo + n - 1) % n];
    const Cell yb = ring[(hi + 1) % n];
    if (ya == yb) throw std::invalid_argument("contact arc leaves a single free boundary cell");

    const int S = disk.size();
    std::vector<std::uint8_t> passable(diskMask.size(), 0);
    for (std::size_t i = 0; i < diskMask.size(); ++i) {
        const Cell p = diskMask.cell_at(i);
        passable[i] = disk.contains(p) && !diskMask.occupied(p) && (!disk.on_boundary(p) || p == ya || p == yb);
    }
    ChordResult res;
    auto path = detail::bfs_path(S, S, passable, ya, yb);
    if (path.empty()) {
        res.interior = false;
        for (std::size_t i = 0; i < diskMask.size(); ++i) {
            const Cell p = diskMask.cell_at(i);
            passable[i] = disk.contains(p) && !diskMask.occupied(p);
        }
        std::vector<std::uint8_t> ra, rb;
        path = detail::bfs_path(S, S, passable, ya, yb, &ra);
        if (path.empty()) {
            detail::bfs_path(S, S, passable, yb, ya, &rb);
            throw NoPath(detail::blocking_ids(diskMask, labels, ra, rb));
        }
    }
    res.path = {std::move(path), ya, yb};
    for (Cell p : res.path.cells) res.rectangle.push_back(disk.to_rectangle(p, M));
    return res;
}

inline std::string overlay(const PixelMask& mask, const std::vector<Cell>& path) {
    std::string s = mask.str();
    const std::size_t stride = static_cast<std::size_t>(mask.width()) + 1;
    for (Cell p : path) s[static_cast<std::size_t>(p.row) * stride + static_cast<std::size_t>(p.col)] = '*';
    return s;
}

}  // namespace unibif
