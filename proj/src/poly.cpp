#include "derham/poly.hpp"

#include "derham/error.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace derham {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m.at(index) = 1;
    p.add_term(m, Rational(1));
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
}

Rational Polynomial::constant_value() const {
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

unsigned Polynomial::degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
}

unsigned Polynomial::total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
        unsigned s = 0;
        for (unsigned e : m) s += e;
        d = std::max(d, s);
    }
    return d;
}

std::map<unsigned, Polynomial> Polynomial::coefficients_in(std::size_t var) const {
    std::map<unsigned, Polynomial> out;
    for (const auto& [m, c] : terms_) {
        Monomial rest = m;
        unsigned e = rest[var];
        rest[var] = 0;
        auto it = out.try_emplace(e, nvars_).first;
        it->second.add_term(rest, c);
    }
    return out;
}

Polynomial Polynomial::leading_coefficient_in(std::size_t var) const {
    unsigned top = degree_in(var);
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] != top) continue;
        Monomial rest = m;
        rest[var] = 0;
        out.add_term(rest, c);
    }
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(std::max(a.nvars_, b.nvars_));
    Monomial m(out.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result = constant(nvars_, Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Polynomial Polynomial::shifted(std::size_t var, unsigned k) const {
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
        Monomial s = m;
        s[var] += k;
        out.terms_.emplace(std::move(s), c);
    }
    return out;
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw ValidationError("polynomial division by zero");
    Polynomial quotient(a.nvars());
    Polynomial rest = a;
    const Monomial& lb = b.leading_monomial();
    const Rational& cb = b.leading_coefficient();
    Monomial shift(a.nvars());
    while (!rest.is_zero()) {
        const Monomial& lr = rest.leading_monomial();
        for (std::size_t i = 0; i < shift.size(); ++i) {
            if (lr[i] < lb[i]) return std::nullopt;
            shift[i] = lr[i] - lb[i];
        }
        Polynomial t(a.nvars());
        t.add_term(shift, rest.leading_coefficient() / cb);
        quotient += t;
        rest -= t * b;
    }
    return quotient;
}

Rational make_primitive(Polynomial& p) {
    if (p.is_zero()) return Rational(1);
    Integer den_lcm = 1;
    Integer num_gcd = 0;
    for (const auto& [m, c] : p.terms()) {
        den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
        num_gcd = boost::multiprecision::gcd(num_gcd, numerator(c));
    }
    Rational factor(den_lcm, num_gcd);
    if (p.leading_coefficient() < 0) factor = -factor;
    p *= factor;
    return factor;
}

namespace {

std::size_t first_variable(const Polynomial& a, const Polynomial& b) {
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        if (a.depends_on(v) || b.depends_on(v)) return v;
    }
    return a.nvars();
}

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("polynomial gcd: inexact division");
    return *q;
}

// gcd of the coefficients of `a` viewed as a polynomial in `var`.
Polynomial content_in(const Polynomial& a, std::size_t var) {
    Polynomial g(a.nvars());
    for (const auto& [e, c] : a.coefficients_in(var)) {
        g = gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

// Pseudo-remainder of a by b in `var`; deg_var(b) >= 1.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t var) {
    const unsigned db = b.degree_in(var);
    const Polynomial lb = b.leading_coefficient_in(var);
    while (!a.is_zero()) {
        unsigned da = a.degree_in(var);
        if (da < db) break;
        Polynomial la = a.leading_coefficient_in(var);
        a = lb * a - (la * b).shifted(var, da - db);
    }
    return a;
}

Polynomial primitive_part_in(const Polynomial& a, std::size_t var) {
    Polynomial p = exact_quotient(a, content_in(a, var));
    make_primitive(p);
    return p;
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, for cheap univariate images.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(z & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
    std::uint64_t r = lo + hi;
    return r >= kPrime ? r - kPrime : r;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    return r >= kPrime ? r - kPrime : r;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mul_mod(r, a);
        a = mul_mod(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::optional<std::uint64_t> reduce_mod(const Rational& c) {
    Integer m(kPrime);
    Integer n = numerator(c) % m;
    if (n < 0) n += m;
    Integer d = denominator(c) % m;
    if (d == 0) return std::nullopt;
    return mul_mod(n.convert_to<std::uint64_t>(), inv_mod(d.convert_to<std::uint64_t>()));
}

using ModPoly = std::vector<std::uint64_t>;  // coefficient of x^i at index i

void trim(ModPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Image of `a` as a univariate polynomial in `var`, other variables set to `point`.
std::optional<ModPoly> univariate_image(const Polynomial& a, std::size_t var, const std::vector<std::uint64_t>& point) {
    ModPoly out(a.degree_in(var) + 1, 0);
    for (const auto& [m, c] : a.terms()) {
        auto cm = reduce_mod(c);
        if (!cm) return std::nullopt;
        std::uint64_t v = *cm;
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j != var && m[j]) v = mul_mod(v, pow_mod(point[j], m[j]));
        }
        out[m[var]] = add_mod(out[m[var]], v);
    }
    trim(out);
    return out;
}

std::size_t gcd_degree(ModPoly a, ModPoly b) {
    while (!b.empty()) {
        const std::uint64_t inv = inv_mod(b.back());
        while (a.size() >= b.size()) {
            const std::uint64_t f = mul_mod(a.back(), inv);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = sub_mod(a[i + shift], mul_mod(f, b[i]));
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// True when a and b are certainly coprime: for every variable, the degree of
// the gcd of good univariate images is an upper bound for the true degree.
bool certainly_coprime(const Polynomial& a, const Polynomial& b) {
    std::vector<std::uint64_t> point(a.nvars());
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    for (auto& x : point) {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        x = seed % kPrime;
    }
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        const unsigned da = a.degree_in(v), db = b.degree_in(v);
        if (da == 0 || db == 0) continue;
        auto ia = univariate_image(a, v, point);
        auto ib = univariate_image(b, v, point);
        if (!ia || !ib || ia->size() != da + 1 || ib->size() != db + 1) return false;
        if (gcd_degree(*ia, *ib) != 0) return false;
    }
    return true;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) return Polynomial(a.nvars());
    if (a.is_zero() || b.is_zero()) {
        Polynomial g = a.is_zero() ? b : a;
        make_primitive(g);
        return g;
    }
    const std::size_t n = std::max(a.nvars(), b.nvars());
    if (a.is_constant() || b.is_constant()) return Polynomial::constant(n, Rational(1));

    if (certainly_coprime(a, b)) return Polynomial::constant(n, Rational(1));

    const std::size_t v = first_variable(a, b);
    if (!a.depends_on(v)) return gcd(a, content_in(b, v));
    if (!b.depends_on(v)) return gcd(content_in(a, v), b);

    const Polynomial ca = content_in(a, v);
    const Polynomial cb = content_in(b, v);
    const Polynomial c = gcd(ca, cb);
    Polynomial p = exact_quotient(a, ca);
    Polynomial q = exact_quotient(b, cb);
    if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);

    Polynomial g(n);
    for (;;) {
        Polynomial r = pseudo_remainder(p, q, v);
        if (r.is_zero()) {
            g = primitive_part_in(q, v);
            break;
        }
        if (!r.depends_on(v)) {
            g = Polynomial::constant(n, Rational(1));
            break;
        }
        p = std::move(q);
        q = primitive_part_in(r, v);
    }
    Polynomial out = c * g;
    make_primitive(out);
    return out;
}

RationalFunction::RationalFunction(std::size_t nvars)
    : num_(nvars), den_(Polynomial::constant(nvars, Rational(1))) {}

RationalFunction::RationalFunction(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.nvars(), Rational(1))) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw EvalError("rational function with zero denominator");
    reduce();
}

RationalFunction RationalFunction::from_coprime(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw EvalError("rational function with zero denominator");
    RationalFunction out(num.nvars());
    out.num_ = std::move(num);
    out.den_ = std::move(den);
    if (out.den_.is_constant() || out.num_.is_zero()) {
        out.reduce();
    } else {
        out.num_ *= make_primitive(out.den_);
    }
    return out;
}

void RationalFunction::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.nvars(), Rational(1));
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_quotient(num_, g);
            den_ = exact_quotient(den_, g);
        }
    }
    if (den_.is_constant()) {
        num_ *= Rational(1) / den_.constant_value();
        den_ = Polynomial::constant(num_.nvars(), Rational(1));
        return;
    }
    Rational f = make_primitive(den_);
    num_ *= f;
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    Polynomial g = gcd(a.den_, b.den_);
    Polynomial bd = exact_quotient(b.den_, g);
    Polynomial ad = exact_quotient(a.den_, g);
    return RationalFunction(a.num_ * bd + b.num_ * ad, a.den_ * bd);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.den_.is_constant() && b.den_.is_constant()) {
        return RationalFunction(a.num_ * b.num_);
    }
    Polynomial g1 = gcd(a.num_, b.den_);
    Polynomial g2 = gcd(b.num_, a.den_);
    Polynomial an = exact_quotient(a.num_, g1), bd = exact_quotient(b.den_, g1);
    Polynomial bn = exact_quotient(b.num_, g2), ad = exact_quotient(a.den_, g2);
    return RationalFunction(an * bn, ad * bd);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw EvalError("division by the zero rational function");
    return a * RationalFunction(b.den_, b.num_);
}

RationalFunction RationalFunction::pow(unsigned e) const {
    RationalFunction out(num_.nvars());
    out.num_ = num_.pow(e);
    out.den_ = den_.pow(e);
    return out;
}

}  // namespace derham
