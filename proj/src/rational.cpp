#include "n3/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace n3 {

namespace {

using i128 = __int128;

constexpr i128 kMax64 = std::numeric_limits<int64_t>::max();
constexpr i128 kMin64 = std::numeric_limits<int64_t>::min();

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class mpz_from(i128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1u
                              : static_cast<unsigned __int128>(x);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFull));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

bool fits64(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) != 0; }

}  // namespace

Rational Rational::from_i128(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0) return Rational();
    i128 g = gcd128(n, d);
    if (g != 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    if (n >= kMin64 && n <= kMax64 && d <= kMax64) {
        r.num_ = static_cast<int64_t>(n);
        r.den_ = static_cast<int64_t>(d);
        return r;
    }
    mpq_class q(mpz_from(n), mpz_from(d));
    r.big_ = std::make_shared<const mpq_class>(std::move(q));
    return r;
}

Rational Rational::from_mpq(mpq_class q) {
    q.canonicalize();
    Rational r;
    if (fits64(q.get_num()) && fits64(q.get_den())) {
        r.num_ = q.get_num().get_si();
        r.den_ = q.get_den().get_si();
        return r;
    }
    r.big_ = std::make_shared<const mpq_class>(std::move(q));
    return r;
}

Rational::Rational(long long n, long long d) { *this = from_i128(n, d); }

Rational::Rational(const mpq_class& q) { *this = from_mpq(q); }

Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto valid_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    text = trim(text);
    auto slash = text.find('/');
    std::string_view ns = trim(text.substr(0, slash));
    std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
    if (!valid_int(ns) || !valid_int(ds))
        throw std::invalid_argument("invalid rational: '" + std::string(text) + "'");
    std::string nstr(ns.front() == '+' ? ns.substr(1) : ns);
    std::string dstr(ds.front() == '+' ? ds.substr(1) : ds);
    mpz_class n(nstr, 10), d(dstr, 10);
    if (d == 0) throw std::invalid_argument("invalid rational: zero denominator");
    return from_mpq(mpq_class(n, d));
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

mpz_class Rational::numerator() const { return big_ ? big_->get_num() : mpz_class(static_cast<long>(num_)); }

mpz_class Rational::denominator() const { return big_ ? big_->get_den() : mpz_class(static_cast<long>(den_)); }

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

long long Rational::to_int() const {
    if (!is_integer()) throw std::domain_error("rational " + str() + " is not an integer");
    if (big_) throw std::domain_error("integer " + str() + " out of range");
    return num_;
}

Rational Rational::floor() const {
    if (big_) {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return from_mpq(mpq_class(r));
    }
    int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return Rational(static_cast<long long>(q));
}

Rational Rational::ceil() const { return -(-*this).floor(); }

std::string Rational::str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::str_pq() const {
    if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
    if (big_) return from_mpq(-*big_);
    return from_i128(-static_cast<i128>(num_), den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return Rational::from_i128(static_cast<i128>(a.num_) + b.num_, a.den_);
        return Rational::from_i128(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                                   static_cast<i128>(a.den_) * b.den_);
    }
    return Rational::from_mpq(a.to_mpq() + b.to_mpq());
}

Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return Rational::from_i128(static_cast<i128>(a.num_) - b.num_, a.den_);
        return Rational::from_i128(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                                   static_cast<i128>(a.den_) * b.den_);
    }
    return Rational::from_mpq(a.to_mpq() - b.to_mpq());
}

Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.num_ == 0 || b.num_ == 0) return Rational();
        return Rational::from_i128(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    return Rational::from_mpq(a.to_mpq() * b.to_mpq());
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.big_ && !b.big_)
        return Rational::from_i128(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    return Rational::from_mpq(a.to_mpq() / b.to_mpq());
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (!a.big_ || !b.big_) return false;
    return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace n3
