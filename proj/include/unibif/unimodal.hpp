#pragma once

/**
 * @file unimodal.hpp
 * @brief Numeric dynamics of a single map f_t: horseshoe certification,
 *        itineraries, and locating horseshoe points from symbolic addresses.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unibif/family.hpp"
#include "unibif/symbolic.hpp"

namespace unibif {

class OrbitEscaped : public std::runtime_error {
public:
    OrbitEscaped(std::size_t step, double value)
        : std::runtime_error("orbit escaped at step " + std::to_string(step)), step_(step),
          value_(value) {}
    std::size_t step() const noexcept { return step_; }
    double value() const noexcept { return value_; }

private:
    std::size_t step_;
    double value_;
};

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotAHorseshoe : public std::runtime_error {
public:
    enum class Reason { MissingFixedPoints, NoPreimage, ExpansionViolated };

    NotAHorseshoe(Reason reason, std::string detail, double x = 0.0)
        : std::runtime_error(describe(reason) + ": " + detail), reason_(reason), x_(x) {}

    Reason reason() const noexcept { return reason_; }
    /// Offending point for ExpansionViolated.
    double x() const noexcept { return x_; }

    static std::string describe(Reason r) {
        switch (r) {
            case Reason::MissingFixedPoints: return "missing fixed points";
            case Reason::NoPreimage: return "no solution for a1/b1";
            case Reason::ExpansionViolated: return "expansion violated";
        }
        return "not a horseshoe";
    }

private:
    Reason reason_;
    double x_;
};

/// a < a1 < 0 < b1 < b with f(a) = a, f(b) = a, f(a1) = f(b1) = b, and
/// |f'| >= lambda > 1 on [a, a1] u [b1, b].
struct HorseshoeCertificate {
    double a = 0, a1 = 0, b1 = 0, b = 0;
    double lambda = 0;
    double tol = 0;
    double t = 0;
};

inline double default_c_tol(const Family& F) { return 1e-12 * std::max(1.0, F.bound()); }

namespace detail {

// Bisection for a sign change of g on [lo, hi]; returns the endpoint-side
// midpoint once the bracket stops shrinking.
template <class G>
double bisect(G&& g, double lo, double hi, int maxIter = 200) {
    double glo = g(lo);
    if (glo == 0.0) return lo;
    if (g(hi) == 0.0) return hi;
    for (int i = 0; i < maxIter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// All sign changes of g on a uniform scan of [lo, hi], each refined by bisection.
template <class G>
std::vector<double> scan_roots(G&& g, double lo, double hi, std::size_t intervals) {
    std::vector<double> roots;
    double xprev = lo;
    double gprev = g(lo);
    if (gprev == 0.0) roots.push_back(lo);
    for (std::size_t i = 1; i <= intervals; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (gprev != 0.0 && (gx < 0) != (gprev < 0)) {
            roots.push_back(bisect(g, xprev, x));
        }
        xprev = x;
        gprev = gx;
    }
    return roots;
}

}  // namespace detail

inline HorseshoeCertificate certify_horseshoe(const Family& F, double t, double tol = 1e-9,
                                              std::size_t samples = 4096) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("parameter must lie in [0, 1]");
    using R = NotAHorseshoe::Reason;
    const double M = F.bound();
    auto f = [&](double x) { return F(t, x); };

    const auto fixed = detail::scan_roots([&](double x) { return f(x) - x; }, -M, M, samples);
    if (fixed.size() != 2)
        throw NotAHorseshoe(R::MissingFixedPoints,
                            "found " + std::to_string(fixed.size()) + " fixed points in [-M, M]");
    HorseshoeCertificate c;
    c.t = t;
    c.tol = tol;
    c.a = fixed.front();

    // b on the right lap: f decreasing on [0, inf), f(b) = a
    const double f0 = f(0.0);
    if (!(f0 > c.a)) throw NotAHorseshoe(R::NoPreimage, "critical value below the left fixed point");
    double hi = M;
    while (f(hi) > c.a && hi < F.escape_bound()) hi *= 2.0;
    if (f(hi) > c.a) throw NotAHorseshoe(R::NoPreimage, "no b with f(b) = a");
    c.b = detail::bisect([&](double x) { return f(x) - c.a; }, 0.0, hi);

    if (!(f0 > c.b)) throw NotAHorseshoe(R::NoPreimage, "critical value does not exceed b");
    if (!(f(c.a) < c.b)) throw NotAHorseshoe(R::NoPreimage, "f(a) >= b");
    c.a1 = detail::bisect([&](double x) { return f(x) - c.b; }, c.a, 0.0);
    c.b1 = detail::bisect([&](double x) { return f(x) - c.b; }, 0.0, c.b);

    if (!(c.a < c.a1 && c.a1 < 0.0 && 0.0 < c.b1 && c.b1 < c.b))
        throw NotAHorseshoe(R::NoPreimage, "points not ordered a < a1 < 0 < b1 < b");
    const double res = std::max({std::abs(f(c.a) - c.a), std::abs(f(c.b) - c.a),
                                 std::abs(f(c.a1) - c.b), std::abs(f(c.b1) - c.b)});
    if (res > tol) throw NotAHorseshoe(R::NoPreimage, "residual above tolerance");

    double lambda = std::numeric_limits<double>::infinity();
    double worst = c.a;
    auto sweep = [&](double lo, double hi2) {
        for (std::size_t i = 0; i <= samples; ++i) {
            const double x = lo + (hi2 - lo) * static_cast<double>(i) / static_cast<double>(samples);
            const double d = std::abs(F.derivative(t, x));
            if (d < lambda) {
                lambda = d;
                worst = x;
            }
        }
    };
    sweep(c.a, c.a1);
    sweep(c.b1, c.b);
    if (!(lambda > 1.0))
        throw NotAHorseshoe(R::ExpansionViolated, "|f'| = " + std::to_string(lambda), worst);
    c.lambda = lambda;
    return c;
}

/// Itinerary of x0 under f_t: L below -c_tol, R above c_tol, otherwise C
/// (and stop).
inline FiniteItinerary itinerary(const Family& F, double t, double x0, std::size_t length,
                                 std::optional<double> cTol = std::nullopt) {
    if (length < 1) throw std::invalid_argument("itinerary length must be positive");
    const double ct = cTol.value_or(default_c_tol(F));
    if (!(ct > 0)) throw std::invalid_argument("c_tol must be positive");
    std::vector<Symbol> w;
    double x = x0;
    for (std::size_t i = 0; i < length; ++i) {
        if (!(std::abs(x) <= F.escape_bound())) throw OrbitEscaped(i, x);
        if (std::abs(x) <= ct) {
            w.push_back(Symbol::C);
            break;
        }
        w.push_back(x < 0 ? Symbol::L : Symbol::R);
        x = F(t, x);
    }
    return FiniteItinerary(std::move(w));
}

inline FiniteItinerary kneading_sequence(const Family& F, double t, std::size_t length,
                                         std::optional<double> cTol = std::nullopt) {
    return itinerary(F, t, F(t, 0.0), length, cTol);
}

/// The point of the horseshoe's invariant Cantor set with itinerary `a`,
/// found by backward iteration through the two monotone inverse branches.
inline double point_from_itinerary(const Family& F, const HorseshoeCertificate& cert,
                                   const PeriodicSequence& a, double eps = 1e-11,
                                   std::size_t maxSweeps = 10000) {
    const double t = cert.t;
    auto inverse = [&](Symbol s, double y) {
        y = std::clamp(y, cert.a, cert.b);
        if (s == Symbol::L)
            return detail::bisect([&](double x) { return F(t, x) - y; }, cert.a, 0.0);
        return detail::bisect([&](double x) { return F(t, x) - y; }, 0.0, cert.b);
    };
    const auto blk = a.block();
    double x = 0.5 * (cert.b1 + cert.b);
    for (std::size_t sweep = 0; sweep < maxSweeps; ++sweep) {
        double y = x;
        for (std::size_t k = blk.size(); k-- > 0;) y = inverse(blk[k], y);
        const double change = std::abs(y - x);
        x = y;
        if (change <= 1e-3 * eps) return x;
    }
    throw NoConvergence("backward iteration did not settle within eps");
}

inline double iterate(const Family& F, double t, double x, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) x = F(t, x);
    return x;
}

/// Sorted orbit of a period-n point, read back as a shuffle.
inline Shuffle numeric_shuffle(const Family& F, double t, double x, std::size_t n) {
    std::vector<std::pair<double, std::size_t>> orbit(n);
    for (std::size_t i = 0; i < n; ++i) {
        orbit[i] = {x, i};
        x = F(t, x);
    }
    std::sort(orbit.begin(), orbit.end());
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = orbit[i].second;
    return Shuffle(std::move(perm));
}

}  // namespace unibif
