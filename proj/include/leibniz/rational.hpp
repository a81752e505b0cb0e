#ifndef LEIBNIZ_RATIONAL_HPP
#define LEIBNIZ_RATIONAL_HPP

#include <cstdint>
#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace leibniz {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic left the int64 range after normalization. Grids and test inputs
// are kept small enough that this never fires in a passing run.
struct rational_overflow : error {
    rational_overflow() : error("rational overflow") {}
};

namespace detail {
using i128 = __int128;

inline std::int64_t checked_narrow(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) throw rational_overflow{};
    return static_cast<std::int64_t>(v);
}
} // namespace detail

// Exact rational on int64 with gcd normalization; den > 0 always.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw error("rational division by zero");
        return from128(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return detail::i128(a.num_) * b.den_ < detail::i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }
    static Rational from128(detail::i128 n, detail::i128 d) {
        if (d == 0) throw error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        detail::i128 an = n < 0 ? -n : n;
        // gcd on i128
        detail::i128 a = an, b = d;
        while (b) { detail::i128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        Rational r;
        r.num_ = detail::checked_narrow(n);
        r.den_ = detail::checked_narrow(d);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// sqrt over Q when it exists.
inline std::optional<std::int64_t> isqrt_exact(std::int64_t v) {
    if (v < 0) return std::nullopt;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    for (std::int64_t c = r > 1 ? r - 2 : 0; c <= r + 2; ++c)
        if (c * c == v) return c;
    return std::nullopt;
}

inline std::optional<Rational> sqrt_exact(const Rational& q) {
    if (q.is_negative()) return std::nullopt;
    auto n = isqrt_exact(q.num());
    auto d = isqrt_exact(q.den());
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

// Gaussian rational a + b*i, the exact scalar backend.
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(std::int64_t n) : re(n) {}
    GaussianRational(Rational r) : re(r) {}
    GaussianRational(Rational r, Rational i) : re(r), im(i) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n2 = b.re * b.re + b.im * b.im;
        if (n2.is_zero()) throw error("gaussian rational division by zero");
        return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    Rational norm2() const { return re * re + im * im; }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

    static GaussianRational i() { return {Rational(0), Rational(1)}; }
};

// Square root in Q(i) when representable: (x+yi)^2 = a+bi needs |a+bi| rational
// and (a+|z|)/2 a rational square.
inline std::optional<GaussianRational> sqrt_exact(const GaussianRational& z) {
    if (z.im.is_zero()) {
        if (!z.re.is_negative()) {
            auto r = sqrt_exact(z.re);
            if (!r) return std::nullopt;
            return GaussianRational{*r, Rational(0)};
        }
        auto r = sqrt_exact(-z.re);
        if (!r) return std::nullopt;
        return GaussianRational{Rational(0), *r};
    }
    auto mod = sqrt_exact(z.norm2());
    if (!mod) return std::nullopt;
    Rational x2 = (z.re + *mod) / Rational(2);
    auto x = sqrt_exact(x2);
    if (!x || x->is_zero()) return std::nullopt;
    Rational y = z.im / (Rational(2) * *x);
    GaussianRational root{*x, y};
    if (root * root != z) return std::nullopt;
    return root;
}

} // namespace leibniz

#endif
