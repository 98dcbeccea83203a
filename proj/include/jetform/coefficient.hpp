#pragma once

#include <gmpxx.h>

#include <string>

namespace jetform {

/// Exact Gaussian rational a + b*i with arbitrary-precision components.
/// All arithmetic is exact; values are always stored in canonical
/// (reduced-fraction) form.
class GaussRat {
  public:
    GaussRat() : re_(0), im_(0) {}
    GaussRat(long v) : re_(v), im_(0) {}
    GaussRat(const mpq_class& re) : re_(re), im_(0) {}
    GaussRat(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussRat i() { return GaussRat(mpq_class(0), mpq_class(1)); }
    static GaussRat rational(long num, long den) {
        mpq_class q(num, den);
        q.canonicalize();
        return GaussRat(q);
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    GaussRat operator-() const { return GaussRat(-re_, -im_); }

    GaussRat& operator+=(const GaussRat& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) {
        mpq_class re = re_ * o.re_ - im_ * o.im_;
        mpq_class im = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }
    GaussRat& operator/=(const GaussRat& o) {
        // (a+bi)/(c+di) = (a+bi)(c-di)/(c^2+d^2)
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
        mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    GaussRat inverse() const { return GaussRat(1) / *this; }

    /// Plain debug rendering "a+b*i"; the expression printer in textio owns
    /// the canonical output format.
    std::string str() const;

  private:
    mpq_class re_;
    mpq_class im_;
};

} // namespace jetform
