#include "padicrot/padic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace padicrot {

namespace {

constexpr unsigned kUnitBits = 250;
constexpr unsigned kExactBits = 1024;

void require_prime(unsigned p) {
    if (!is_prime(p)) throw InvalidArgument("p must be a prime, got " + std::to_string(p));
}

unsigned common_prime(const PAdic& x, const PAdic& y) {
    if (x.prime() == 0) return y.prime();
    if (y.prime() == 0) return x.prime();
    if (x.prime() != y.prime())
        throw PrimeMismatch("operands over Q_" + std::to_string(x.prime()) + " and Q_" +
                            std::to_string(y.prime()));
    return x.prime();
}

template <class T>
T mod_pos(const T& a, const T& m) {
    T r = a % m;
    if (r < 0) r += m;
    return r;
}

unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
    return static_cast<unsigned long long>(static_cast<unsigned __int128>(a) * b % m);
}

unsigned long long powmod(unsigned long long b, unsigned long long e, unsigned long long m) {
    unsigned long long r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

long long small_inverse(long long a, long long m) {
    long long g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1) {
        long long q = g / a1;
        std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
        std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
    }
    if (g != 1) throw DivisionByZero("not invertible modulo " + std::to_string(m));
    return ((x % m) + m) % m;
}

// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
unsigned long long sqrt_mod_prime(unsigned long long a, unsigned long long p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) {
        unsigned long long r = powmod(a, (p + 1) / 4, p);
        return std::min(r, p - r);
    }
    unsigned long long q = p - 1;
    int s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    unsigned long long z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    unsigned long long c = powmod(z, q, p), r = powmod(a, (q + 1) / 2, p), t = powmod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        unsigned long long tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        unsigned long long b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        r = mulmod(r, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return std::min(r, p - r);
}

bool is_perfect_square(const Integer& n, Integer& root) {
    if (n < 0) return false;
    root = mp::sqrt(n);
    return root * root == n;
}

}  // namespace

bool is_prime(unsigned long long n) {
    if (n < 2) return false;
    for (unsigned long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int max_precision(unsigned p) {
    return static_cast<int>(std::floor(kUnitBits / std::log2(static_cast<double>(p))));
}

const BigInt& pow_p(unsigned p, int k) {
    thread_local std::unordered_map<unsigned, std::deque<BigInt>> cache;
    if (k < 0) throw InvalidArgument("negative exponent in pow_p");
    auto& powers = cache[p];
    if (powers.empty()) powers.emplace_back(1);
    while (static_cast<int>(powers.size()) <= k) {
        if (mp::msb(powers.back()) > 2 * kUnitBits)
            throw PrecisionExhausted("p^" + std::to_string(k) + " exceeds the unit storage");
        powers.push_back(powers.back() * p);
    }
    return powers[static_cast<std::size_t>(k)];
}

Rational rational_pow(unsigned p, int e) {
    Integer n = mp::pow(Integer(p), static_cast<unsigned>(e < 0 ? -e : e));
    return e >= 0 ? Rational(n) : Rational(Integer(1), n);
}

int valuation_of(const Integer& n, unsigned p) {
    if (n == 0) return kInfiniteValuation;
    Integer m = n;
    int v = 0;
    while (m % p == 0) { m /= p; ++v; }
    return v;
}

int valuation_of(const BigInt& n, unsigned p) {
    if (n == 0) return kInfiniteValuation;
    BigInt m = n;
    int v = 0;
    while (m % p == 0) { m /= p; ++v; }
    return v;
}

int valuation_of(const Rational& q, unsigned p) {
    if (q == 0) return kInfiniteValuation;
    return valuation_of(Integer(mp::numerator(q)), p) - valuation_of(Integer(mp::denominator(q)), p);
}

BigInt inverse_mod_pk(const BigInt& unit, unsigned p, int k) {
    if (k <= 0) return 0;
    BigInt u = mod_pos(unit, pow_p(p, k));
    long long u0 = static_cast<long long>((u % p).convert_to<unsigned long long>());
    if (u0 == 0) throw DivisionByZero("inverse of a non-unit modulo p^k");
    BigInt x = small_inverse(u0, p);
    int have = 1;
    while (have < k) {
        have = std::min(2 * have, k);
        const BigInt& m = pow_p(p, have);
        BigInt t = (u % m) * x % m;
        t = mod_pos(BigInt(2 - t), m);
        x = x * t % m;
    }
    return x;
}

std::string rational_to_string(const Rational& q) {
    if (mp::denominator(q) == 1) return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

Rational parse_rational(const std::string& text) {
    auto valid_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                           [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    auto strip_plus = [](std::string s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(text)) throw InvalidArgument("not a rational: '" + text + "'");
        return Rational(Integer(strip_plus(text)));
    }
    std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b)) throw InvalidArgument("not a rational: '" + text + "'");
    Integer den(strip_plus(b));
    if (den == 0) throw DivisionByZero("zero denominator in '" + text + "'");
    return Rational(Integer(strip_plus(a)), den);
}

// ---------------------------------------------------------------------------
// PAdic

PAdic PAdic::zero(unsigned p, int prec) {
    return from_rational(p, Rational(0), prec);
}

PAdic PAdic::one(unsigned p, int prec) {
    return from_rational(p, Rational(1), prec);
}

PAdic PAdic::from_integer(unsigned p, const Integer& n, int prec) {
    return from_rational(p, Rational(n), prec);
}

PAdic PAdic::from_int(unsigned p, long long n, int prec) {
    return from_rational(p, Rational(n), prec);
}

PAdic PAdic::from_rational(unsigned p, const Rational& q, int prec) {
    require_prime(p);
    if (prec < 1 || prec > max_precision(p))
        throw InvalidArgument("precision must be in [1, " + std::to_string(max_precision(p)) + "]");
    PAdic r;
    r.p_ = p;
    r.prec_ = prec;
    r.exact_ = q;
    if (q == 0) return r;
    Integer num = mp::numerator(q), den = mp::denominator(q);
    int v = 0;
    while (num % p == 0) { num /= p; ++v; }
    while (den % p == 0) { den /= p; --v; }
    Integer m(pow_p(p, prec));
    BigInt n1(mod_pos(num, m)), d1(mod_pos(den, m));
    r.zero_ = false;
    r.val_ = v;
    r.rel_ = prec;
    r.unit_ = n1 * inverse_mod_pk(d1, p, prec) % pow_p(p, prec);
    r.drop_oversized_exact();
    return r;
}

PAdic PAdic::from_residue(unsigned p, const BigInt& r, int absprec, int prec) {
    require_prime(p);
    if (absprec <= 0) return inexact_zero(p, absprec, prec);
    BigInt x = mod_pos(r, pow_p(p, absprec));
    if (x == 0) return inexact_zero(p, absprec, prec);
    int v = valuation_of(x, p);
    return from_unit(p, v, x / pow_p(p, v), absprec - v, prec);
}

PAdic PAdic::from_unit(unsigned p, int valuation, const BigInt& unit, int relprec, int prec) {
    require_prime(p);
    PAdic r;
    r.p_ = p;
    r.prec_ = prec;
    r.exact_.reset();
    if (relprec <= 0) {
        r.val_ = valuation;
        return r;
    }
    r.rel_ = std::min(relprec, prec);
    r.unit_ = mod_pos(unit, pow_p(p, r.rel_));
    if (r.unit_ % p == 0) throw InvalidArgument("from_unit: unit divisible by p");
    r.zero_ = false;
    r.val_ = valuation;
    return r;
}

PAdic PAdic::inexact_zero(unsigned p, int absprec, int prec) {
    PAdic r;
    r.p_ = p;
    r.prec_ = prec;
    r.exact_.reset();
    r.val_ = absprec;
    return r;
}

PAdic PAdic::parse(unsigned p, const std::string& text, int prec) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto at = s.find('@');
    if (at != std::string::npos) {
        unsigned q = static_cast<unsigned>(std::stoul(s.substr(at + 1)));
        if (q != p) throw PrimeMismatch("compact form over Q_" + std::to_string(q));
        auto colon = s.find(':');
        auto lb = s.find('['), rb = s.find(']');
        if (colon == std::string::npos || lb == std::string::npos || rb == std::string::npos)
            throw InvalidArgument("malformed compact p-adic: '" + text + "'");
        int v = std::stoi(s.substr(0, colon));
        std::vector<unsigned> digits;
        std::stringstream ds(s.substr(lb + 1, rb - lb - 1));
        std::string item;
        while (std::getline(ds, item, ','))
            if (!item.empty()) digits.push_back(static_cast<unsigned>(std::stoul(item)));
        BigInt r = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (digits[i] >= p) throw InvalidArgument("digit out of range in '" + text + "'");
            r += pow_p(p, static_cast<int>(i)) * digits[i];
        }
        PAdic x = from_residue(p, r, static_cast<int>(digits.size()), prec);
        if (x.zero_) return inexact_zero(p, v + static_cast<int>(digits.size()), prec);
        x.val_ += v;
        return x;
    }
    if (s.rfind("O(", 0) == 0) {
        auto caret = s.find('^');
        if (caret == std::string::npos) throw InvalidArgument("malformed O-term: '" + text + "'");
        return inexact_zero(p, std::stoi(s.substr(caret + 1)), prec);
    }
    return from_rational(p, parse_rational(s), prec);
}

int PAdic::absprec() const {
    if (exact_) return kInfiniteValuation;
    if (zero_) return val_;
    return val_ + rel_;
}

int PAdic::valuation() const {
    if (exact_ && zero_) return kInfiniteValuation;
    if (zero_)
        throw PrecisionExhausted("value is indistinguishable from zero: O(" + std::to_string(p_) + "^" +
                                 std::to_string(val_) + ")");
    return val_;
}

Rational PAdic::abs() const {
    if (is_exact_zero()) return Rational(0);
    return rational_pow(p_, -valuation());
}

Rational PAdic::to_rational() const {
    if (exact_) return *exact_;
    if (zero_) return Rational(0);
    return Rational(Integer(unit_)) * rational_pow(p_, val_);
}

std::vector<unsigned> PAdic::digits() const {
    std::vector<unsigned> d;
    if (zero_) return d;
    BigInt u = unit_;
    for (int i = 0; i < rel_; ++i) {
        d.push_back((u % p_).convert_to<unsigned>());
        u /= p_;
    }
    return d;
}

bool PAdic::is_integral() const {
    if (zero_) return exact_.has_value() || val_ >= 0;
    return val_ >= 0;
}

bool PAdic::is_unit() const {
    return !zero_ && val_ == 0;
}

BigInt PAdic::unit_mod(int k) const {
    if (k <= 0) return 0;
    if (k <= rel_) return unit_ % pow_p(p_, k);
    if (exact_) return from_rational(p_, *exact_, k).unit_;
    throw PrecisionExhausted("requested " + std::to_string(k) + " digits of a value known to " +
                             std::to_string(rel_));
}

BigInt PAdic::residue(int k) const {
    if (k <= 0) return 0;
    if (zero_) {
        if (exact_ || val_ >= k) return 0;
        throw PrecisionExhausted("residue mod p^" + std::to_string(k) + " of O(p^" + std::to_string(val_) + ")");
    }
    if (val_ < 0) throw InvalidArgument("residue of a non-integral p-adic number");
    if (val_ >= k) return 0;
    if (!exact_ && k > val_ + rel_)
        throw PrecisionExhausted("residue mod p^" + std::to_string(k) + " needs more digits than known");
    return unit_mod(k - val_) * pow_p(p_, val_) % pow_p(p_, k);
}

std::uint64_t PAdic::residue_u64(int k) const {
    return residue(k).convert_to<std::uint64_t>();
}

PAdic PAdic::operator-() const {
    if (exact_) return from_rational(p_, -*exact_, prec_);
    if (zero_) return *this;
    PAdic r = *this;
    r.unit_ = pow_p(p_, rel_) - unit_;
    return r;
}

PAdic PAdic::inv() const {
    if (exact_) {
        if (zero_) throw DivisionByZero("inverse of exact zero");
        return from_rational(p_, 1 / *exact_, prec_);
    }
    if (zero_) throw PrecisionExhausted("inverse of a value indistinguishable from zero");
    return from_unit(p_, -val_, inverse_mod_pk(unit_, p_, rel_), rel_, prec_);
}

PAdic PAdic::truncated(int relprec) const {
    if (zero_) return exact_ ? *this : inexact_zero(p_, val_, prec_);
    int r = std::min(relprec, rel_);
    return from_unit(p_, val_, unit_ % pow_p(p_, std::max(r, 0)), r, prec_);
}

PAdic PAdic::with_precision(int prec) const {
    if (exact_) return from_rational(p_, *exact_, prec);
    PAdic r = *this;
    r.prec_ = prec;
    if (!zero_ && rel_ > prec) {
        r.rel_ = prec;
        r.unit_ = unit_ % pow_p(p_, prec);
    }
    return r;
}

void PAdic::drop_oversized_exact() {
    if (!exact_) return;
    if (mp::msb(mp::abs(mp::numerator(*exact_)) + 1) > kExactBits ||
        mp::msb(mp::denominator(*exact_)) > kExactBits)
        exact_.reset();
}

PAdic operator+(const PAdic& x, const PAdic& y) {
    unsigned p = common_prime(x, y);
    if (x.p_ == 0) return y;
    if (y.p_ == 0) return x;
    int N = std::max(x.prec_, y.prec_);
    if (x.exact_ && y.exact_) return PAdic::from_rational(p, *x.exact_ + *y.exact_, N);
    if (x.is_exact_zero()) return y;
    if (y.is_exact_zero()) return x;
    int A = std::min(x.absprec(), y.absprec());
    int m = kInfiniteValuation;
    if (!x.zero_) m = x.val_;
    if (!y.zero_) m = std::min(m, y.val_);
    if (m >= A) return PAdic::inexact_zero(p, A, N);
    int K = std::min(A - m, N);
    BigInt s = 0;
    for (const PAdic* t : {&x, &y}) {
        if (t->zero_) continue;
        int shift = t->val_ - m;
        if (shift >= K) continue;
        s += t->unit_mod(K - shift) * pow_p(p, shift);
    }
    s %= pow_p(p, K);
    if (s == 0) return PAdic::inexact_zero(p, m + K, N);
    int t = valuation_of(s, p);
    return PAdic::from_unit(p, m + t, s / pow_p(p, t), K - t, N);
}

PAdic operator-(const PAdic& x, const PAdic& y) {
    return x + (-y);
}

PAdic operator*(const PAdic& x, const PAdic& y) {
    unsigned p = common_prime(x, y);
    if (x.p_ == 0) return x;
    if (y.p_ == 0) return y;
    int N = std::max(x.prec_, y.prec_);
    if (x.exact_ && y.exact_) return PAdic::from_rational(p, *x.exact_ * *y.exact_, N);
    if (x.is_exact_zero() || y.is_exact_zero()) return PAdic::zero(p, N);
    if (x.zero_ || y.zero_) return PAdic::inexact_zero(p, x.val_ + y.val_, N);
    int rel = N;
    if (!x.exact_) rel = std::min(rel, x.rel_);
    if (!y.exact_) rel = std::min(rel, y.rel_);
    BigInt u = x.unit_mod(rel) * y.unit_mod(rel) % pow_p(p, rel);
    return PAdic::from_unit(p, x.val_ + y.val_, u, rel, N);
}

PAdic operator/(const PAdic& x, const PAdic& y) {
    return x * y.inv();
}

bool operator==(const PAdic& x, const PAdic& y) {
    return (x - y).is_zero();
}

std::string PAdic::to_compact() const {
    if (zero_) {
        if (exact_) return "0";
        return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    }
    std::string s = std::to_string(val_) + ":[";
    auto d = digits();
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + "]@" + std::to_string(p_);
}

std::string PAdic::to_expansion() const {
    if (zero_) return to_compact();
    std::string ps = std::to_string(p_);
    std::string s = ps + "^" + std::to_string(val_) + " * (";
    auto d = digits();
    bool first = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0) continue;
        if (!first) s += " + ";
        first = false;
        s += std::to_string(d[i]);
        if (i == 1) s += "*" + ps;
        if (i > 1) s += "*" + ps + "^" + std::to_string(i);
    }
    if (!exact_) s += " + O(" + ps + "^" + std::to_string(rel_) + ")";
    else s += " + ...";
    return s + ")";
}

std::string PAdic::to_string() const {
    if (exact_) return rational_to_string(*exact_);
    return to_compact();
}

PAdic pow(const PAdic& x, int e) {
    if (e < 0) return pow(x.inv(), -e);
    PAdic r = PAdic::one(x.prime(), x.precision());
    PAdic b = x;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Square roots and square classes

long long legendre(long long a, unsigned p) {
    long long m = ((a % static_cast<long long>(p)) + p) % p;
    if (m == 0) return 0;
    return powmod(static_cast<unsigned long long>(m), (p - 1) / 2, p) == 1 ? 1 : -1;
}

PAdic hensel_sqrt(const PAdic& x) {
    unsigned p = x.prime();
    if (x.is_exact_zero()) return x;
    int v = x.valuation();
    if (v % 2 != 0) throw NotASquare(x.to_string() + " has odd valuation");
    int rel = x.is_exact() ? x.precision() : x.relprec();
    BigInt u = x.is_exact() ? PAdic::from_rational(p, *x.exact_value(), rel).unit() : x.unit();
    BigInt r;
    int out_rel = rel;
    if (p == 2) {
        if (rel < 3) throw PrecisionExhausted("a 2-adic square test needs three digits of the unit");
        if (u % 8 != 1) throw NotASquare(x.to_string() + " has unit not congruent to 1 mod 8");
        r = 1;
        for (int i = 3; i < rel; ++i)
            if ((r * r - u) % pow_p(2, i + 1) != 0) r += pow_p(2, i - 1);
        out_rel = rel - 1;
        r %= pow_p(2, out_rel);
        if (r % 4 == 3) r = pow_p(2, out_rel) - r;
    } else {
        unsigned long long u0 = (u % p).convert_to<unsigned long long>();
        if (legendre(static_cast<long long>(u0), p) != 1)
            throw NotASquare(x.to_string() + " has a non-residue unit");
        r = sqrt_mod_prime(u0, p);
        int have = 1;
        while (have < rel) {
            have = std::min(2 * have, rel);
            const BigInt& m = pow_p(p, have);
            BigInt f = mod_pos(BigInt(r * r - u % m), m);
            BigInt step = f * inverse_mod_pk(BigInt(2 * r % m), p, have) % m;
            r = mod_pos(BigInt(r - step), m);
        }
        if ((r % p) > (p - 1) / 2) r = pow_p(p, rel) - r;
    }
    PAdic root = PAdic::from_unit(p, v / 2, r, out_rel, x.precision());
    if (x.is_exact()) {
        const Rational& q = *x.exact_value();
        Integer a, b;
        if (is_perfect_square(mp::numerator(q), a) && is_perfect_square(mp::denominator(q), b)) {
            PAdic cand = PAdic::from_rational(p, Rational(a, b), x.precision());
            return cand == root ? cand : -cand;
        }
    }
    return root;
}

long long nonresidue_u(unsigned p) {
    require_prime(p);
    if (p == 2) throw NotApplicable("u is defined only for odd p");
    for (long long a = 2;; ++a)
        if (legendre(a, p) == -1) return a;
}

long long structure_v(unsigned p) {
    if (p == 2) return -1;
    return p % 4 == 3 ? -1 : -nonresidue_u(p);
}

PAdic canonical_u(unsigned p, int prec) {
    return PAdic::from_int(p, nonresidue_u(p), prec);
}

PAdic canonical_v(unsigned p, int prec) {
    if (p == 2) throw NotApplicable("v is defined only for odd p");
    return PAdic::from_int(p, structure_v(p), prec);
}

SquareClass square_class(const PAdic& x) {
    unsigned p = x.prime();
    if (x.is_exact_zero()) throw ZeroHasNoClass("0 has no square class");
    int v = x.valuation();
    bool odd = (v % 2 + 2) % 2 == 1;
    int rel = x.is_exact() ? std::max(x.relprec(), 3) : x.relprec();
    if (p == 2) {
        if (rel < 3) throw PrecisionExhausted("a 2-adic square class needs three digits of the unit");
        BigInt u = x.is_exact() ? PAdic::from_rational(2, *x.exact_value(), std::max(3, x.precision())).unit()
                                : x.unit();
        unsigned u8 = (u % 8).convert_to<unsigned>();
        long long rep = u8 == 1 ? 1 : u8 == 3 ? -5 : u8 == 5 ? 5 : -1;
        return {2, odd ? 2 * rep : rep};
    }
    long long u0 = static_cast<long long>((x.unit() % p).convert_to<unsigned long long>());
    bool residue = legendre(u0, p) == 1;
    long long rep = residue ? 1 : nonresidue_u(p);
    return {p, odd ? rep * static_cast<long long>(p) : rep};
}

bool is_square(const PAdic& x) {
    return square_class(x).rep == 1;
}

SquareClass class_mul(const SquareClass& a, const SquareClass& b) {
    if (a.p != b.p) throw PrimeMismatch("square classes over different primes");
    return square_class(PAdic::from_int(a.p, a.rep * b.rep));
}

std::vector<SquareClass> all_square_classes(unsigned p) {
    if (p == 2) return {{2, 1}, {2, -1}, {2, 2}, {2, -2}, {2, 5}, {2, -5}, {2, 10}, {2, -10}};
    long long u = nonresidue_u(p), pp = p;
    return {{p, 1}, {p, u}, {p, pp}, {p, u * pp}};
}

std::string square_class_name(const SquareClass& c) {
    if (c.p == 2) return std::to_string(c.rep);
    long long u = nonresidue_u(c.p), pp = c.p;
    if (c.rep == 1) return "1";
    if (c.rep == u) return "u";
    if (c.rep == pp) return "p";
    return "up";
}

// ---------------------------------------------------------------------------
// Measures, enumeration, sampling

bool Ball::contains(const PAdic& x) const {
    PAdic d = x - center;
    if (d.is_zero()) return d.is_exact_zero() || d.absprec() >= -k;
    return d.valuation() >= -k;
}

Rational measure_ball(const Ball& b) {
    return rational_pow(b.center.prime(), b.k);
}

Rational mult_haar_measure(unsigned p, int /*shell*/) {
    require_prime(p);
    return Rational(1) - Rational(1, p);
}

std::uint64_t upow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

ResidueRange::ResidueRange(unsigned p, int k) {
    require_prime(p);
    if (k < 1) throw InvalidArgument("enumeration depth must be at least 1");
    if (k * std::log2(static_cast<double>(p)) > 62) throw InvalidArgument("p^k too large to enumerate");
    count_ = upow(p, k);
}

ResidueRange enumerate_residues(unsigned p, int k) {
    return ResidueRange(p, k);
}

PAdic sample_uniform_Zp(unsigned p, std::mt19937_64& rng, int prec) {
    int chunk = std::max(1, static_cast<int>(std::floor(62.0 / std::log2(static_cast<double>(p)))));
    BigInt r = 0;
    for (int pos = 0; pos < prec; pos += chunk) {
        int len = std::min(chunk, prec - pos);
        std::uniform_int_distribution<std::uint64_t> dist(0, upow(p, len) - 1);
        r += pow_p(p, pos) * dist(rng);
    }
    return PAdic::from_residue(p, r, prec, prec);
}

}  // namespace padicrot
