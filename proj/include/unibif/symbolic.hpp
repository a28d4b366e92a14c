#pragma once

/**
 * @file symbolic.hpp
 * @brief Exact combinatorics of L/R/C itineraries for unimodal maps.
 *
 * Sequences are ordered by the kneading (parity) order: at the first
 * differing index the symbol order L < C < R decides, reversed when the
 * common prefix holds an odd number of R's.  Periodic sequences are always
 * held in minimal-period form, so the twin map mu and the pairing map nu
 * below are total functions.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace unibif {

enum class Symbol : std::uint8_t { L = 0, C = 1, R = 2 };

constexpr char to_char(Symbol s) noexcept {
    switch (s) {
        case Symbol::L: return 'L';
        case Symbol::C: return 'C';
        case Symbol::R: return 'R';
    }
    return '?';
}

constexpr Symbol flip(Symbol s) noexcept {
    return s == Symbol::L ? Symbol::R : (s == Symbol::R ? Symbol::L : Symbol::C);
}

constexpr std::strong_ordering operator<=>(Symbol a, Symbol b) noexcept {
    return static_cast<std::uint8_t>(a) <=> static_cast<std::uint8_t>(b);
}

/// Thrown by the text parsers; `position` is the offending character index.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

namespace detail {

inline Symbol parse_symbol(char c, std::size_t pos) {
    switch (c) {
        case 'L': return Symbol::L;
        case 'R': return Symbol::R;
        case 'C': return Symbol::C;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
}

// Smallest p dividing n such that s is p-periodic (prefix-function).
inline std::size_t minimal_period(std::span<const Symbol> s) {
    const std::size_t n = s.size();
    if (n == 0) return 0;
    std::vector<std::size_t> pi(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t k = pi[i - 1];
        while (k > 0 && s[i] != s[k]) k = pi[k - 1];
        if (s[i] == s[k]) ++k;
        pi[i] = k;
    }
    const std::size_t p = n - pi[n - 1];
    return n % p == 0 ? p : n;
}

// Parity comparison over the first `len` symbols of two symbol streams.
template <class At1, class At2>
std::strong_ordering parity_compare(std::size_t len, At1&& a, At2&& b) {
    bool odd = false;
    for (std::size_t i = 0; i < len; ++i) {
        const Symbol x = a(i);
        const Symbol y = b(i);
        if (x != y) {
            const auto o = x <=> y;
            if (!odd) return o;
            return o == std::strong_ordering::less ? std::strong_ordering::greater
                                                   : std::strong_ordering::less;
        }
        if (x == Symbol::R) odd = !odd;
    }
    return std::strong_ordering::equal;
}

}  // namespace detail

/// An infinite periodic L/R sequence (A_0 ... A_{n-1})^infinity stored by its
/// minimal-period block.
class PeriodicSequence {
public:
    /// Reduces `block` to its minimal period.  Rejects empty blocks and C.
    explicit PeriodicSequence(std::vector<Symbol> block) : block_(std::move(block)) {
        if (block_.empty()) throw std::invalid_argument("periodic sequence needs a nonempty block");
        for (std::size_t i = 0; i < block_.size(); ++i)
            if (block_[i] == Symbol::C)
                throw ParseError("periodic sequence cannot contain C", i);
        block_.resize(detail::minimal_period(block_));
    }

    static PeriodicSequence parse(std::string_view text) {
        if (text.empty()) throw ParseError("empty sequence", 0);
        std::vector<Symbol> b;
        b.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            const Symbol s = detail::parse_symbol(text[i], i);
            if (s == Symbol::C) throw ParseError("periodic sequence cannot contain C", i);
            b.push_back(s);
        }
        return PeriodicSequence(std::move(b));
    }

    std::size_t period() const noexcept { return block_.size(); }
    std::span<const Symbol> block() const noexcept { return block_; }

    /// Symbol at index i of the infinite sequence.
    Symbol operator[](std::size_t i) const noexcept { return block_[i % block_.size()]; }

    std::string str() const {
        std::string s;
        s.reserve(block_.size());
        for (Symbol x : block_) s.push_back(to_char(x));
        return s;
    }

    friend bool operator==(const PeriodicSequence&, const PeriodicSequence&) = default;

    /// Kneading order (not lexicographic).
    friend std::strong_ordering operator<=>(const PeriodicSequence& a, const PeriodicSequence& b) {
        const std::size_t window = std::lcm(a.period(), b.period());
        return detail::parity_compare(
            window, [&](std::size_t i) { return a[i]; }, [&](std::size_t i) { return b[i]; });
    }

    friend std::ostream& operator<<(std::ostream& os, const PeriodicSequence& a) {
        return os << '(' << a.str() << ")^inf";
    }

private:
    std::vector<Symbol> block_;
};

/// A finite itinerary; C may only appear as the final symbol.
class FiniteItinerary {
public:
    FiniteItinerary() = default;
    explicit FiniteItinerary(std::vector<Symbol> word) : word_(std::move(word)) {
        for (std::size_t i = 0; i < word_.size(); ++i)
            if (word_[i] == Symbol::C && i + 1 != word_.size())
                throw ParseError("C must be the final symbol", i);
    }

    static FiniteItinerary parse(std::string_view text) {
        std::vector<Symbol> w;
        w.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) w.push_back(detail::parse_symbol(text[i], i));
        return FiniteItinerary(std::move(w));
    }

    std::size_t size() const noexcept { return word_.size(); }
    bool empty() const noexcept { return word_.empty(); }
    bool terminated_by_c() const noexcept { return !word_.empty() && word_.back() == Symbol::C; }
    std::span<const Symbol> word() const noexcept { return word_; }
    Symbol operator[](std::size_t i) const noexcept { return word_[i]; }

    std::string str() const {
        std::string s;
        for (Symbol x : word_) s.push_back(to_char(x));
        return s;
    }

    friend bool operator==(const FiniteItinerary&, const FiniteItinerary&) = default;

private:
    std::vector<Symbol> word_;
};

// Comparisons.  Two periodic sequences agree everywhere once they agree on
// lcm(per A, per B) symbols.  Finite words are compared over their common
// length; a terminal C takes part with its order position, and agreement of
// a truncated (non-C) word with the other operand's prefix counts as Equal.

inline std::strong_ordering compare(const PeriodicSequence& a, const PeriodicSequence& b) {
    return a <=> b;
}

inline std::strong_ordering compare(const FiniteItinerary& a, const FiniteItinerary& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("compare needs nonempty operands");
    return detail::parity_compare(
        std::min(a.size(), b.size()), [&](std::size_t i) { return a[i]; },
        [&](std::size_t i) { return b[i]; });
}

inline std::strong_ordering compare(const FiniteItinerary& a, const PeriodicSequence& b) {
    if (a.empty()) throw std::invalid_argument("compare needs nonempty operands");
    return detail::parity_compare(
        a.size(), [&](std::size_t i) { return a[i]; }, [&](std::size_t i) { return b[i]; });
}

inline std::strong_ordering compare(const PeriodicSequence& a, const FiniteItinerary& b) {
    return 0 <=> compare(b, a);
}

inline PeriodicSequence shift(const PeriodicSequence& a, std::size_t k) {
    const auto blk = a.block();
    const std::size_t n = blk.size();
    std::vector<Symbol> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = blk[(i + k) % n];
    return PeriodicSequence(std::move(out));
}

inline bool is_maximal(const PeriodicSequence& a) {
    for (std::size_t m = 1; m < a.period(); ++m)
        if (shift(a, m) > a) return false;
    return true;
}

/// The unique rotation index m with shift(a, m) maximal.
inline std::size_t maximal_rotation_index(const PeriodicSequence& a) {
    const std::size_t n = a.period();
    std::size_t best = 0;
    auto rot = [&](std::size_t m) {
        return [&a, m](std::size_t i) { return a[i + m]; };
    };
    for (std::size_t m = 1; m < n; ++m)
        if (detail::parity_compare(n, rot(m), rot(best)) == std::strong_ordering::greater) best = m;
    return best;
}

/// Twin map: flip the last symbol of the maximal rotation, rotate back.
/// Equivalently, flip the symbol at index (m - 1) mod n of the block.
inline PeriodicSequence mu(const PeriodicSequence& a) {
    const std::size_t n = a.period();
    const std::size_t m = maximal_rotation_index(a);
    std::vector<Symbol> b(a.block().begin(), a.block().end());
    auto& s = b[(m + n - 1) % n];
    s = flip(s);
    return PeriodicSequence(std::move(b));
}

/// Pairing map: mu when it keeps the period, otherwise the half-period shift.
inline PeriodicSequence nu(const PeriodicSequence& a) {
    PeriodicSequence m = mu(a);
    if (m.period() == a.period()) return m;
    return shift(a, a.period() / 2);
}

/// Permutation of {0..n-1}; for a periodic orbit, perm lists the iterate
/// indices in increasing spatial order.
class Shuffle {
public:
    explicit Shuffle(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
        std::vector<bool> seen(perm_.size(), false);
        for (std::size_t v : perm_) {
            if (v >= perm_.size() || seen[v]) throw std::invalid_argument("shuffle is not a permutation");
            seen[v] = true;
        }
    }

    std::size_t size() const noexcept { return perm_.size(); }
    std::span<const std::size_t> perm() const noexcept { return perm_; }
    std::size_t operator[](std::size_t i) const noexcept { return perm_[i]; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(perm_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const Shuffle&, const Shuffle&) = default;
    friend auto operator<=>(const Shuffle&, const Shuffle&) = default;

private:
    std::vector<std::size_t> perm_;
};

/// Spatial order of the orbit, read off symbolically: rotations sorted by
/// the kneading order.
inline Shuffle shuffle_of(const PeriodicSequence& a) {
    const std::size_t n = a.period();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return detail::parity_compare(
                   n, [&](std::size_t k) { return a[k + i]; },
                   [&](std::size_t k) { return a[k + j]; }) == std::strong_ordering::less;
    });
    return Shuffle(std::move(idx));
}

inline Shuffle gamma_half_shift(const Shuffle& s) {
    const std::size_t n = s.size();
    if (n % 2 != 0) throw std::invalid_argument("half shift needs an even-length shuffle");
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (s[i] + n / 2) % n;
    return Shuffle(std::move(out));
}

inline constexpr std::size_t kMaxEnumeratedPeriod = 24;

/// One maximal representative per cyclic orbit of minimal period n, in
/// descending kneading order.  Lyndon words come from the FKM generator.
inline std::vector<PeriodicSequence> enumerate_min_period_orbits(std::size_t n) {
    if (n < 1 || n > kMaxEnumeratedPeriod)
        throw std::out_of_range("orbit enumeration supports periods 1.." +
                                std::to_string(kMaxEnumeratedPeriod));
    std::vector<PeriodicSequence> out;
    std::vector<int> a(n + 1, 0);
    std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t t, std::size_t p) {
        if (t > n) {
            if (n % p == 0 && p == n) {
                std::vector<Symbol> b(n);
                for (std::size_t i = 0; i < n; ++i) b[i] = a[i + 1] ? Symbol::R : Symbol::L;
                PeriodicSequence s(std::move(b));
                out.push_back(shift(s, maximal_rotation_index(s)));
            }
            return;
        }
        a[t] = a[t - p];
        gen(t + 1, p);
        for (int j = a[t - p] + 1; j < 2; ++j) {
            a[t] = j;
            gen(t + 1, t);
        }
    };
    gen(1, 1);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// Every sequence of minimal period n (all rotations of every orbit).
inline std::vector<PeriodicSequence> all_min_period_sequences(std::size_t n) {
    std::vector<PeriodicSequence> out;
    for (const auto& rep : enumerate_min_period_orbits(n))
        for (std::size_t k = 0; k < n; ++k) out.push_back(shift(rep, k));
    return out;
}

/// Unordered pair stored with the larger sequence first.
struct SequencePair {
    PeriodicSequence first;
    PeriodicSequence second;

    SequencePair(PeriodicSequence a, PeriodicSequence b)
        : first(a > b ? a : b), second(a > b ? b : a) {}

    friend bool operator==(const SequencePair&, const SequencePair&) = default;
    friend std::strong_ordering operator<=>(const SequencePair& x, const SequencePair& y) {
        if (auto c = x.first <=> y.first; c != 0) return c;
        return x.second <=> y.second;
    }
};

/// Sorts descending by the larger member and removes duplicates.
inline void canonicalize(std::vector<SequencePair>& pairs) {
    std::sort(pairs.begin(), pairs.end(), std::greater<>());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

/// The partition {A, nu(A)} of all minimal-period-n sequences.
inline std::vector<SequencePair> symbolic_matching(std::size_t n) {
    std::vector<SequencePair> pairs;
    for (const auto& a : all_min_period_sequences(n)) pairs.emplace_back(a, nu(a));
    canonicalize(pairs);
    return pairs;
}

}  // namespace unibif

template <>
struct std::hash<unibif::PeriodicSequence> {
    std::size_t operator()(const unibif::PeriodicSequence& a) const noexcept {
        return std::hash<std::string>{}(a.str());
    }
};
