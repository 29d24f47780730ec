#include "heavenly/gaussian.hpp"

#include <stdexcept>

namespace heavenly {

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational GaussianRational::ratio(long num, long den) {
  if (den == 0)
    throw std::domain_error("GaussianRational: zero denominator");
  return {mpq_class(num, den), mpq_class(0)};
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero())
    throw std::domain_error("GaussianRational: division by zero");
  mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0)
      throw std::domain_error("GaussianRational: division by zero");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b) {
  int c = cmp(a.re_, b.re_);
  if (c == 0)
    c = cmp(a.im_, b.im_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

GaussianRational GaussianRational::pow(int e) const {
  if (e < 0)
    return inverse().pow(-e);
  GaussianRational result(1), base = *this;
  while (e > 0) {
    if (e & 1)
      result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

std::string GaussianRational::str() const {
  if (sgn(im_) == 0)
    return rational_str(re_);
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = rational_str(im_) + "*i";
  if (sgn(re_) == 0)
    return imag;
  std::string out = "(" + rational_str(re_);
  if (imag[0] != '-')
    out += "+";
  return out + imag + ")";
}

} // namespace heavenly
