#ifndef HEAVENLY_GAUSSIAN_HPP
#define HEAVENLY_GAUSSIAN_HPP

#include <complex>
#include <compare>
#include <string>

#include <gmpxx.h>

namespace heavenly {

// Exact element of Q(i): re + im*i with arbitrary-precision rational parts.
class GaussianRational {
public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v), im_(0) {}
  GaussianRational(mpq_class re, mpq_class im = 0);

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }
  static GaussianRational ratio(long num, long den);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  // |z|^2, exact
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  // Lexicographic on (re, im); only used to key containers.
  friend std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b);

  GaussianRational pow(int e) const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  // "3", "-1/2", "i", "-2*i", "(1/2+3*i)"
  std::string str() const;
  // true when str() is a bare token that needs no parentheses around it as a factor
  bool is_atomic() const { return is_real() || sgn(re_) == 0; }

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::string rational_str(const mpq_class& q);

} // namespace heavenly

#endif
