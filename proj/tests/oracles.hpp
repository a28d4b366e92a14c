#pragma once

// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

namespace oracle {

// Point of the full tent map T(y) = 1 - 2|y| on [-1, 1] whose itinerary is
// the periodic word `w` ('L' below 0, 'R' above).  T expands by 2, so
// backward iteration converges to the unique point.
inline double tent_point(const std::string& w) {
    double y = 0.0;
    for (int sweep = 0; sweep < 80; ++sweep)
        for (std::size_t k = w.size(); k-- > 0;) y = w[k] == 'L' ? (y - 1.0) / 2.0 : (1.0 - y) / 2.0;
    return y;
}

inline std::string rotate(const std::string& w, std::size_t k) {
    k %= w.size();
    return w.substr(k) + w.substr(0, k);
}

inline bool is_primitive(const std::string& w) {
    for (std::size_t p = 1; p < w.size(); ++p)
        if (w.size() % p == 0 && rotate(w, p) == w) return false;
    return true;
}

// All words of length n over {L, R} with minimal period n.
inline std::vector<std::string> primitive_words(std::size_t n) {
    std::vector<std::string> out;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        std::string w(n, 'L');
        for (std::size_t i = 0; i < n; ++i)
            if (bits & (1u << (n - 1 - i))) w[i] = 'R';
        if (is_primitive(w)) out.push_back(w);
    }
    return out;
}

inline int mobius(int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
    }
    return n > 1 ? -m : m;
}

// Number of points of minimal period n of the full 2-shift.
inline long long min_period_points(int n) {
    long long s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += mobius(d) * (1LL << (n / d));
    return s;
}

// Index of the rotation with the largest tent-map point.
inline std::size_t max_rotation_by_tent(const std::string& w) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (tent_point(rotate(w, k)) > tent_point(rotate(w, best))) best = k;
    return best;
}

// Orbit indices sorted by tent-map position.
inline std::vector<std::size_t> tent_shuffle(const std::string& w) {
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return tent_point(rotate(w, a)) < tent_point(rotate(w, b)); });
    return idx;
}

// Raster as rows of '#'/'.'; 4-connected BFS between two free cells.
inline bool free_path_exists(const std::vector<std::string>& rows, int r0, int c0, int r1, int c1) {
    const int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
    auto free = [&](int r, int c) { return r >= 0 && c >= 0 && r < h && c < w && rows[r][c] == '.'; };
    if (!free(r0, c0) || !free(r1, c1)) return false;
    std::vector<char> seen(static_cast<std::size_t>(h * w), 0);
    std::deque<std::pair<int, int>> q{{r0, c0}};
    seen[static_cast<std::size_t>(r0 * w + c0)] = 1;
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    while (!q.empty()) {
        auto [r, c] = q.front();
        q.pop_front();
        if (r == r1 && c == c1) return true;
        for (int k = 0; k < 4; ++k) {
            const int rr = r + dr[k], cc = c + dc[k];
            if (free(rr, cc) && !seen[static_cast<std::size_t>(rr * w + cc)]) {
                seen[static_cast<std::size_t>(rr * w + cc)] = 1;
                q.emplace_back(rr, cc);
            }
        }
    }
    return false;
}

}  // namespace oracle
