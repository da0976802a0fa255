#pragma once

// Minimal RAII wrapper over MPFR. Every operation takes an explicit rounding
// direction; callers producing upper bounds pass MPFR_RNDU.

#include <mpfr.h>

#include <cstdio>
#include <string>
#include <utility>

#include "exact_linalg.hpp"

namespace cospec {

inline constexpr mpfr_prec_t kBigFloatPrecision = 256;

class BigFloat {
public:
    BigFloat() {
        mpfr_init2(v_, kBigFloatPrecision);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept : BigFloat() { mpfr_swap(v_, o.v_); }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_integer(const Integer& z, mpfr_rnd_t rnd) {
        BigFloat f;
        mpfr_set_z(f.v_, z.get_mpz_t(), rnd);
        return f;
    }
    static BigFloat from_rational(const Rational& q, mpfr_rnd_t rnd) {
        BigFloat f;
        mpfr_set_q(f.v_, q.get_mpq_t(), rnd);
        return f;
    }
    static BigFloat from_double(double d) {
        BigFloat f;
        mpfr_set_d(f.v_, d, MPFR_RNDN);
        return f;
    }

    static BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_mul(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    static BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_add(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    static BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_sub(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    static BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_div(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    static BigFloat pow(const BigFloat& base, const BigFloat& exponent, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_pow(r.v_, base.v_, exponent.v_, rnd);
        return r;
    }
    static BigFloat pow_ui(const BigFloat& base, unsigned long e, mpfr_rnd_t rnd) {
        BigFloat r;
        mpfr_pow_ui(r.v_, base.v_, e, rnd);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int compare(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
    int compare(long x) const { return mpfr_cmp_si(v_, x); }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return a.compare(b) < 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return a.compare(b) == 0; }

    /// Scientific notation with `digits` significant decimals, rounded in direction rnd.
    std::string to_string(int digits = 12, mpfr_rnd_t rnd = MPFR_RNDU) const {
        const char fmt_u[] = "%.*RUe", fmt_d[] = "%.*RDe", fmt_n[] = "%.*RNe";
        const char* fmt = rnd == MPFR_RNDU ? fmt_u : rnd == MPFR_RNDD ? fmt_d : fmt_n;
        char* buf = nullptr;
        mpfr_asprintf(&buf, fmt, digits, v_);
        std::string out(buf);
        mpfr_free_str(buf);
        return out;
    }

    mpfr_srcptr get() const noexcept { return v_; }

private:
    mpfr_t v_;
};

} // namespace cospec
