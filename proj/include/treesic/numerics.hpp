#pragma once
// Shared numeric kernels: exact big-integer / big-rational arithmetic (GMP),
// log-domain combinatorics, and a complex gamma function.
//
// Everything here is a pure function of its inputs and safe for concurrent use.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmp.h>

namespace treesic {

using ComplexValue = std::complex<double>;

// Gamma evaluated at a non-positive integer.
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A floating-point path could not certify its accuracy contract.
struct precision_loss_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iteration hit its term cap without meeting its tolerance (bug trap).
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arbitrary-precision signed integer. Thin RAII wrapper over mpz_t with the
// operations the rest of the library needs; not a general bignum surface.
class BigInt {
  public:
    BigInt() { mpz_init(v_); }
    BigInt(long x) { mpz_init_set_si(v_, x); }  // NOLINT: implicit by design
    explicit BigInt(const std::string& decimal) {
        if (mpz_init_set_str(v_, decimal.c_str(), 10) != 0) {
            mpz_clear(v_);
            throw std::invalid_argument("BigInt: bad decimal string: " + decimal);
        }
    }
    BigInt(const BigInt& o) { mpz_init_set(v_, o.v_); }
    BigInt(BigInt&& o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    BigInt& operator=(const BigInt& o) {
        if (this != &o) mpz_set(v_, o.v_);
        return *this;
    }
    BigInt& operator=(BigInt&& o) noexcept {
        mpz_swap(v_, o.v_);
        return *this;
    }
    ~BigInt() { mpz_clear(v_); }

    // 2^e - 1
    static BigInt pow2_minus_1(unsigned long e) {
        BigInt r;
        mpz_ui_pow_ui(r.v_, 2, e);
        mpz_sub_ui(r.v_, r.v_, 1);
        return r;
    }
    static BigInt pow2(unsigned long e) {
        BigInt r;
        mpz_ui_pow_ui(r.v_, 2, e);
        return r;
    }
    static BigInt binomial(unsigned long n, unsigned long k) {
        BigInt r;
        mpz_bin_uiui(r.v_, n, k);
        return r;
    }

    BigInt& operator+=(const BigInt& o) {
        mpz_add(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator-=(const BigInt& o) {
        mpz_sub(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator*=(const BigInt& o) {
        mpz_mul(v_, v_, o.v_);
        return *this;
    }
    BigInt& operator*=(long x) {
        mpz_mul_si(v_, v_, x);
        return *this;
    }
    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
    friend BigInt operator*(BigInt a, long b) { return a *= b; }

    // this += a * b, in place (single GMP call).
    void add_mul(const BigInt& a, const BigInt& b) { mpz_addmul(v_, a.v_, b.v_); }

    friend bool operator==(const BigInt& a, const BigInt& b) { return mpz_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) { return mpz_cmp(a.v_, b.v_) < 0; }

    double to_double() const { return mpz_get_d(v_); }
    std::string to_string() const {
        char* s = mpz_get_str(nullptr, 10, v_);
        std::string out(s);
        void (*freefunc)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefunc);
        freefunc(s, out.size() + 1);
        return out;
    }
    size_t digits() const { return mpz_sizeinbase(v_, 10); }

    const mpz_t& raw() const { return v_; }
    mpz_t& raw() { return v_; }

  private:
    mpz_t v_;
};

// Arbitrary-precision rational, always canonical: denominator > 0, lowest terms.
class BigRational {
  public:
    BigRational() { mpq_init(v_); }
    BigRational(long x) {  // NOLINT: implicit by design
        mpq_init(v_);
        mpq_set_si(v_, x, 1);
    }
    BigRational(long num, long den) {
        if (den == 0) throw std::invalid_argument("BigRational: zero denominator");
        mpq_init(v_);
        // mpq_set_si takes an unsigned denominator; move the sign up front.
        if (den < 0) {
            num = -num;
            den = -den;
        }
        mpq_set_si(v_, num, static_cast<unsigned long>(den));
        mpq_canonicalize(v_);
    }
    BigRational(const BigInt& num, const BigInt& den) {
        mpq_init(v_);
        if (mpz_sgn(den.raw()) == 0) {
            mpq_clear(v_);
            throw std::invalid_argument("BigRational: zero denominator");
        }
        mpz_set(mpq_numref(v_), num.raw());
        mpz_set(mpq_denref(v_), den.raw());
        mpq_canonicalize(v_);
    }
    BigRational(const BigRational& o) {
        mpq_init(v_);
        mpq_set(v_, o.v_);
    }
    BigRational(BigRational&& o) noexcept {
        mpq_init(v_);
        mpq_swap(v_, o.v_);
    }
    BigRational& operator=(const BigRational& o) {
        if (this != &o) mpq_set(v_, o.v_);
        return *this;
    }
    BigRational& operator=(BigRational&& o) noexcept {
        mpq_swap(v_, o.v_);
        return *this;
    }
    ~BigRational() { mpq_clear(v_); }

    BigRational& operator+=(const BigRational& o) {
        mpq_add(v_, v_, o.v_);
        return *this;
    }
    BigRational& operator-=(const BigRational& o) {
        mpq_sub(v_, v_, o.v_);
        return *this;
    }
    BigRational& operator*=(const BigRational& o) {
        mpq_mul(v_, v_, o.v_);
        return *this;
    }
    BigRational& operator/=(const BigRational& o) {
        if (mpq_sgn(o.v_) == 0) throw std::invalid_argument("BigRational: divide by zero");
        mpq_div(v_, v_, o.v_);
        return *this;
    }
    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }
    BigRational operator-() const {
        BigRational r(*this);
        mpq_neg(r.v_, r.v_);
        return r;
    }

    friend bool operator==(const BigRational& a, const BigRational& b) {
        return mpq_equal(a.v_, b.v_) != 0;
    }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return !(a == b); }
    friend bool operator<(const BigRational& a, const BigRational& b) {
        return mpq_cmp(a.v_, b.v_) < 0;
    }
    friend bool operator<=(const BigRational& a, const BigRational& b) {
        return mpq_cmp(a.v_, b.v_) <= 0;
    }
    friend bool operator>(const BigRational& a, const BigRational& b) { return b < a; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return b <= a; }

    BigInt numerator() const {
        BigInt r;
        mpz_set(r.raw(), mpq_numref(v_));
        return r;
    }
    BigInt denominator() const {
        BigInt r;
        mpz_set(r.raw(), mpq_denref(v_));
        return r;
    }
    double to_double() const { return mpq_get_d(v_); }
    std::string to_string() const {
        std::string n = numerator().to_string();
        BigInt d = denominator();
        if (mpz_cmp_ui(d.raw(), 1) == 0) return n;
        return n + "/" + d.to_string();
    }

  private:
    mpq_t v_;
};

// Exact C(n, k). Throws std::invalid_argument if k > n.
BigInt binomial_exact(unsigned long n, unsigned long k);

// ln C(n, k) via log-gamma, relative error <= 1e-12. Throws if k > n.
double ln_binomial(unsigned long n, unsigned long k);

// ln n!
double ln_factorial(unsigned long n);

// Gamma(z) on |Im z| <= 64, -8 <= Re z <= 64, relative error <= 1e-10.
// Lanczos approximation; reflection formula for Re z < 0.5.
// Throws pole_error at z in {0, -1, -2, ...}.
ComplexValue complex_gamma(ComplexValue z);

}  // namespace treesic
