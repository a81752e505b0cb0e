#ifndef LEIBNIZ_SCALAR_HPP
#define LEIBNIZ_SCALAR_HPP

#include "leibniz/rational.hpp"

#include <cfloat>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>

namespace leibniz {

using Cplx = std::complex<double>;

struct Tolerances {
    static constexpr double linear = 1e-10;   // rank / pivot / zero decisions
    static constexpr double residual = 1e-8;  // solver residuals and witness checks
};

// Tolerance comparisons absorb representation error of the boundary itself
// (a parsed literal can sit a few ULPs past a decimal threshold).
inline bool within_tol(double err, double tol, double scale = 1.0) {
    return err <= tol + 4.0 * DBL_EPSILON * std::max(1.0, scale);
}

struct singular_error : error {
    singular_error() : error("matrix is singular") {}
};
// Exact backend only: a needed square root does not exist in Q(i); callers
// fall back to the approximate backend.
struct needs_radicals : error {
    needs_radicals() : error("value needs radicals outside Q(i)") {}
};
struct mixed_dimensions : error {
    mixed_dimensions() : error("vectors of mixed dimensions") {}
};
struct dimension_mismatch : error {
    dimension_mismatch() : error("dimension mismatch") {}
};

// ---------------------------------------------------------------------------
// scalar_ops: the two interchangeable backends behind one interface.
// ---------------------------------------------------------------------------

template <class K>
struct scalar_ops;

template <>
struct scalar_ops<GaussianRational> {
    static constexpr bool exact = true;
    // pivot ordering only; double precision avoids squaring big numerators,
    // and the RREF of an exact matrix is the same for any nonzero pivot choice
    using weight_type = double;

    static bool is_zero(const GaussianRational& x, double) { return x.is_zero(); }
    static weight_type weight(const GaussianRational& x) { return std::norm(x.to_complex()); }
    static double abs(const GaussianRational& x) { return std::abs(x.to_complex()); }
    static Cplx to_complex(const GaussianRational& x) { return x.to_complex(); }
    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return GaussianRational(1); }
    static std::optional<GaussianRational> sqrt(const GaussianRational& x) { return sqrt_exact(x); }
};

template <>
struct scalar_ops<Cplx> {
    static constexpr bool exact = false;
    using weight_type = double;

    static bool is_zero(const Cplx& x, double tol) { return std::abs(x) <= tol; }
    static weight_type weight(const Cplx& x) { return std::norm(x); }
    static double abs(const Cplx& x) { return std::abs(x); }
    static Cplx to_complex(const Cplx& x) { return x; }
    static Cplx zero() { return {}; }
    static Cplx one() { return {1.0, 0.0}; }
    static std::optional<Cplx> sqrt(const Cplx& x) { return std::sqrt(x); }
};

// ---------------------------------------------------------------------------
// Scalar text grammar, shared by the DSL and JSON formats:
//   exact   ->  a/b        or  a/b+c/d*i   (integers a,b,c,d; /1 may be omitted)
//   approx  ->  <float>    or  <float>+<float>i
// ---------------------------------------------------------------------------

struct ScalarLiteral {
    bool rational = false;       // representable in the exact backend
    GaussianRational exact{};    // valid when rational
    Cplx approx{};               // always valid
};

namespace detail {

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
    if (i == s.size()) return false;
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
        if (v < 0) return false;
    }
    out = neg ? -v : v;
    return true;
}

// "a" or "a/b" with integer a, b.
inline bool parse_rational_text(const std::string& s, Rational& out) {
    auto slash = s.find('/');
    std::int64_t n = 0, d = 1;
    if (slash == std::string::npos) {
        if (!parse_int64(s, n)) return false;
    } else {
        if (!parse_int64(s.substr(0, slash), n)) return false;
        if (!parse_int64(s.substr(slash + 1), d) || d == 0) return false;
    }
    out = Rational(n, d);
    return true;
}

inline bool parse_double_text(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// Split "re+im" at the sign that separates the two components (not the leading
// sign, not an exponent sign).
inline bool split_complex_text(const std::string& s, std::string& re, std::string& im) {
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            re = s.substr(0, i);
            im = s.substr(i);
            return true;
        }
    }
    return false;
}

} // namespace detail

// Parses one scalar literal; returns nullopt on malformed text.
inline std::optional<ScalarLiteral> parse_scalar_text(std::string s) {
    if (s.empty()) return std::nullopt;
    ScalarLiteral lit;
    bool imaginary = false;
    std::string re_part = s, im_part;

    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "*i") == 0) {
        // exact form with imaginary component
        imaginary = true;
        s.resize(s.size() - 2);
        if (!detail::split_complex_text(s, re_part, im_part)) return std::nullopt;
        Rational re, im;
        if (!detail::parse_rational_text(re_part, re) || !detail::parse_rational_text(im_part, im))
            return std::nullopt;
        lit.rational = true;
        lit.exact = GaussianRational{re, im};
        lit.approx = lit.exact.to_complex();
        return lit;
    }
    if (s.back() == 'i') {
        imaginary = true;
        s.pop_back();
        if (!detail::split_complex_text(s, re_part, im_part)) return std::nullopt;
    }

    if (!imaginary) {
        Rational r;
        if (detail::parse_rational_text(s, r)) {
            lit.rational = true;
            lit.exact = GaussianRational{r, Rational(0)};
            lit.approx = lit.exact.to_complex();
            return lit;
        }
        double d;
        if (!detail::parse_double_text(s, d)) return std::nullopt;
        lit.rational = false;
        lit.approx = Cplx{d, 0.0};
        return lit;
    }

    // float+float i; integer components still count as rational (e.g. "3+0i")
    Rational re, im;
    if (detail::parse_rational_text(re_part, re) && detail::parse_rational_text(im_part, im)) {
        lit.rational = true;
        lit.exact = GaussianRational{re, im};
        lit.approx = lit.exact.to_complex();
        return lit;
    }
    double dr, di;
    if (!detail::parse_double_text(re_part, dr) || !detail::parse_double_text(im_part, di))
        return std::nullopt;
    lit.rational = false;
    lit.approx = Cplx{dr, di};
    return lit;
}

inline std::string format_scalar(const GaussianRational& x) {
    if (x.im.is_zero()) return x.re.str();
    std::string s = x.re.str();
    s += x.im.is_negative() ? "-" : "+";
    s += x.im.abs().str();
    s += "*i";
    return s;
}

inline std::string format_double(double d) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, d);
        if (std::strtod(probe, nullptr) == d) return probe;
    }
    return buf;
}

inline std::string format_scalar(const Cplx& x) {
    if (x.imag() == 0.0) return format_double(x.real());
    std::string s = format_double(x.real());
    if (x.imag() >= 0.0) s += "+";
    s += format_double(x.imag());
    s += "i";
    return s;
}

// ---------------------------------------------------------------------------
// Rational reconstruction of an approximate scalar (continued fractions).
// ---------------------------------------------------------------------------

inline std::optional<Rational> reconstruct_rational(double x, std::int64_t max_den,
                                                    double tol = Tolerances::linear) {
    if (max_den < 1 || !std::isfinite(x)) return std::nullopt;
    if (std::fabs(x) > 9.0e15) return std::nullopt;

    // convergents of the continued fraction expansion
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p = static_cast<std::int64_t>(std::floor(x)), q = 1;
    double frac = x - std::floor(x);
    std::int64_t best_p = p, best_q = 1;
    for (int it = 0; it < 64; ++it) {
        if (q <= max_den) { best_p = p; best_q = q; }
        else break;
        if (frac < 1e-18) break;
        double inv = 1.0 / frac;
        double a_f = std::floor(inv);
        if (a_f > 9.0e15) break;
        auto a = static_cast<std::int64_t>(a_f);
        frac = inv - a_f;
        std::int64_t p_next = a * p + p_prev;
        std::int64_t q_next = a * q + q_prev;
        if (p_next < p_prev - std::llabs(a) * std::llabs(p) || q_next < 0) break; // overflow guard
        p_prev = p; q_prev = q;
        p = p_next; q = q_next;
    }
    Rational cand(best_p, best_q);
    double err = std::fabs(cand.to_double() - x);
    if (!within_tol(err, tol, std::fabs(x))) return std::nullopt;
    return cand;
}

inline std::optional<GaussianRational> reconstruct_scalar(const Cplx& z, std::int64_t max_den,
                                                          double tol = Tolerances::linear) {
    auto re = reconstruct_rational(z.real(), max_den, tol);
    if (!re) return std::nullopt;
    auto im = reconstruct_rational(z.imag(), max_den, tol);
    if (!im) return std::nullopt;
    return GaussianRational{*re, *im};
}

} // namespace leibniz

#endif
