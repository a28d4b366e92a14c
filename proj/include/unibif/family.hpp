#pragma once

/**
 * @file family.hpp
 * @brief One-parameter families (t, x) -> f_t(x) with t in [0, 1].
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "unibif/expression.hpp"

namespace unibif {

/// Affine display mapping from the unit parameter t to a family's native
/// parameter (e.g. s = 1.4 + 0.7 t for q_s on [1.4, 2.1]).
struct ParameterAxis {
    std::string name = "t";
    double lo = 0.0;
    double hi = 1.0;

    double at(double t) const noexcept { return lo + (hi - lo) * t; }
    double unit(double s) const noexcept { return (s - lo) / (hi - lo); }
};

class Family {
public:
    using Fn = std::function<double(double, double)>;

    /// `deriv` may be empty, in which case central differences are used.
    Family(std::string name, Fn eval, Fn deriv, double boundM, ParameterAxis axis = {})
        : name_(std::move(name)), eval_(std::move(eval)), deriv_(std::move(deriv)),
          boundM_(boundM), axis_(std::move(axis)) {
        if (!eval_) throw std::invalid_argument("family needs an evaluation function");
        if (!(boundM_ > 0.0)) throw std::invalid_argument("family bound M must be positive");
    }

    static Family from_expression(std::string name, std::string_view expr,
                                  std::optional<std::string_view> deriv, double boundM,
                                  ParameterAxis axis = {}) {
        auto f = std::make_shared<Expression>(Expression::parse(expr));
        Fn d;
        if (deriv) {
            auto g = std::make_shared<Expression>(Expression::parse(*deriv));
            d = [g](double t, double x) { return (*g)(t, x); };
        }
        Family fam(std::move(name), [f](double t, double x) { return (*f)(t, x); }, std::move(d),
                   boundM, std::move(axis));
        fam.exprText_ = f->text();
        if (deriv) fam.derivText_ = std::string(*deriv);
        return fam;
    }

    double operator()(double t, double x) const { return eval_(t, x); }

    double derivative(double t, double x) const {
        if (deriv_) return deriv_(t, x);
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        return (eval_(t, x + h) - eval_(t, x - h)) / (2.0 * h);
    }

    const std::string& name() const noexcept { return name_; }
    double bound() const noexcept { return boundM_; }
    bool analytic_derivative() const noexcept { return static_cast<bool>(deriv_); }
    const ParameterAxis& axis() const noexcept { return axis_; }
    const std::string& expression() const noexcept { return exprText_; }
    const std::string& derivative_expression() const noexcept { return derivText_; }

    /// Escape bound used to detect diverging orbits.
    double escape_bound() const noexcept { return 10.0 * boundM_; }

private:
    std::string name_;
    Fn eval_;
    Fn deriv_;
    double boundM_;
    ParameterAxis axis_;
    std::string exprText_;
    std::string derivText_;
};

/// The same family with t rescaled so that [0, 1] covers [lo, hi] of the
/// original parameter interval.
inline Family restrict_parameter(const Family& F, double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw std::invalid_argument("restriction must satisfy 0 <= lo < hi <= 1");
    auto base = std::make_shared<Family>(F);
    Family::Fn d;
    if (F.analytic_derivative())
        d = [base, lo, hi](double t, double x) { return base->derivative(lo + (hi - lo) * t, x); };
    const ParameterAxis& a = F.axis();
    return Family(F.name(), [base, lo, hi](double t, double x) { return (*base)(lo + (hi - lo) * t, x); },
                  std::move(d), F.bound(), ParameterAxis{a.name, a.at(lo), a.at(hi)});
}

/// f_t(x) = (7/2) t - 1 - x^2: fixed-point free at t = 0, a horseshoe at
/// t = 1 (where it equals q_{5/2}).
inline Family reparametrized_quadratic() {
    return Family(
        "quadratic-full", [](double t, double x) { return 3.5 * t - 1.0 - x * x; },
        [](double, double x) { return -2.0 * x; }, 2.2, ParameterAxis{"t", 0.0, 1.0});
}

/// q_s(x) = s - x^2 with s swept linearly over [s0, s1].
inline Family quadratic(double s0, double s1) {
    const double smax = std::max({s0, s1, 0.0});
    // all fixed points lie in [-(1 + sqrt(1 + 4 s))/2, (sqrt(1 + 4 s) - 1)/2]
    const double bound = std::ceil(10.0 * (0.5 * (1.0 + std::sqrt(1.0 + 4.0 * smax)) + 0.02)) / 10.0;
    return Family(
        "quadratic", [s0, s1](double t, double x) { return s0 + (s1 - s0) * t - x * x; },
        [](double, double x) { return -2.0 * x; }, bound, ParameterAxis{"s", s0, s1});
}

}  // namespace unibif
