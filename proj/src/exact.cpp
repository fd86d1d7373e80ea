#include "dhopf/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace dhopf {

namespace {

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t seed = static_cast<std::size_t>(mpz_sgn(z) + 1);
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    hash_combine(seed, static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
  }
  return seed;
}

Rational power_of_ten(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(p);
  Rational r(1, 1);
  r /= Rational(p);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) return fail();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool any_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      --scale;
      any_digit = true;
    }
  }
  if (!any_digit) return fail();
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    long exponent = 0;
    bool exp_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      exponent = exponent * 10 + (text[pos++] - '0');
      exp_digit = true;
      if (exponent > 100000) return fail();
    }
    if (!exp_digit) return fail();
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) return fail();

  Rational value{mpz_class(digits, 10)};
  value *= power_of_ten(scale);
  if (negative) value = -value;
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::size_t hash_value(const Rational& value) {
  std::size_t seed = hash_mpz(value.get_num_mpz_t());
  hash_combine(seed, hash_mpz(value.get_den_mpz_t()));
  return seed;
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite coordinate");
  return Rational(value);
}

Point2::Point2(Rational x_, Rational y_)
    : x(std::move(x_)), y(std::move(y_)), ax(x.get_d()), ay(y.get_d()) {}

Point3::Point3(Rational x_, Rational y_, Rational z_)
    : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), ax(x.get_d()), ay(y.get_d()),
      az(z.get_d()) {}

std::size_t Point2Hash::operator()(const Point2& p) const {
  std::size_t seed = hash_value(p.x);
  hash_combine(seed, hash_value(p.y));
  return seed;
}

std::size_t Point3Hash::operator()(const Point3& p) const {
  std::size_t seed = hash_value(p.x);
  hash_combine(seed, hash_value(p.y));
  hash_combine(seed, hash_value(p.z));
  return seed;
}

Rational orient2d_value(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double det = (b.ax - a.ax) * (c.ay - a.ay) - (b.ay - a.ay) * (c.ax - a.ax);
  const double perm = (std::abs(b.ax) + std::abs(a.ax)) * (std::abs(c.ay) + std::abs(a.ay)) +
                      (std::abs(b.ay) + std::abs(a.ay)) * (std::abs(c.ax) + std::abs(a.ax));
  const double bound = 1e-14 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return sgn(orient2d_value(a, b, c));
}

int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const double bx = b.ax - a.ax, by = b.ay - a.ay, bz = b.az - a.az;
  const double cx = c.ax - a.ax, cy = c.ay - a.ay, cz = c.az - a.az;
  const double dx = d.ax - a.ax, dy = d.ay - a.ay, dz = d.az - a.az;
  const double det = bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);

  const double mbx = std::abs(b.ax) + std::abs(a.ax), mby = std::abs(b.ay) + std::abs(a.ay),
               mbz = std::abs(b.az) + std::abs(a.az);
  const double mcx = std::abs(c.ax) + std::abs(a.ax), mcy = std::abs(c.ay) + std::abs(a.ay),
               mcz = std::abs(c.az) + std::abs(a.az);
  const double mdx = std::abs(d.ax) + std::abs(a.ax), mdy = std::abs(d.ay) + std::abs(a.ay),
               mdz = std::abs(d.az) + std::abs(a.az);
  const double perm = mbx * (mcy * mdz + mcz * mdy) + mby * (mcx * mdz + mcz * mdx) +
                      mbz * (mcx * mdy + mcy * mdx);
  const double bound = 1e-13 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;

  const Rational ebx = b.x - a.x, eby = b.y - a.y, ebz = b.z - a.z;
  const Rational ecx = c.x - a.x, ecy = c.y - a.y, ecz = c.z - a.z;
  const Rational edx = d.x - a.x, edy = d.y - a.y, edz = d.z - a.z;
  const Rational exact =
      ebx * (ecy * edz - ecz * edy) - eby * (ecx * edz - ecz * edx) + ebz * (ecx * edy - ecy * edx);
  return sgn(exact);
}

int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  {
    const double adx = a.ax - d.ax, ady = a.ay - d.ay;
    const double bdx = b.ax - d.ax, bdy = b.ay - d.ay;
    const double cdx = c.ax - d.ax, cdy = c.ay - d.ay;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);

    const double madx = std::abs(a.ax) + std::abs(d.ax), mady = std::abs(a.ay) + std::abs(d.ay);
    const double mbdx = std::abs(b.ax) + std::abs(d.ax), mbdy = std::abs(b.ay) + std::abs(d.ay);
    const double mcdx = std::abs(c.ax) + std::abs(d.ax), mcdy = std::abs(c.ay) + std::abs(d.ay);
    const double perm = (madx * madx + mady * mady) * (mbdx * mcdy + mcdx * mbdy) +
                        (mbdx * mbdx + mbdy * mbdy) * (mcdx * mady + madx * mcdy) +
                        (mcdx * mcdx + mcdy * mcdy) * (madx * mbdy + mbdx * mady);
    const double bound = 1e-12 * perm;
    if (det > bound) return 1;
    if (det < -bound) return -1;
  }
  const Rational adx = a.x - d.x, ady = a.y - d.y;
  const Rational bdx = b.x - d.x, bdy = b.y - d.y;
  const Rational cdx = c.x - d.x, cdy = c.y - d.y;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sgn(det);
}

bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
  const int s = orient2d(a, b, c);
  const int s0 = orient2d(p, b, c);
  const int s1 = orient2d(a, p, c);
  const int s2 = orient2d(a, b, p);
  return s0 * s >= 0 && s1 * s >= 0 && s2 * s >= 0;
}

std::array<Rational, 3> barycentric(const Point2& p, const Point2& a, const Point2& b,
                                    const Point2& c) {
  const Rational total = orient2d_value(a, b, c);
  if (total == 0) throw std::domain_error("barycentric coordinates of a degenerate triangle");
  std::array<Rational, 3> w{orient2d_value(p, b, c), orient2d_value(a, p, c),
                            orient2d_value(a, b, p)};
  for (auto& x : w) x /= total;
  return w;
}

Point3 affine_combination(const std::array<Rational, 3>& w, const Point3& a, const Point3& b,
                          const Point3& c) {
  return Point3(w[0] * a.x + w[1] * b.x + w[2] * c.x, w[0] * a.y + w[1] * b.y + w[2] * c.y,
                w[0] * a.z + w[1] * b.z + w[2] * c.z);
}

Point2 affine_combination(const std::array<Rational, 3>& w, const Point2& a, const Point2& b,
                          const Point2& c) {
  return Point2(w[0] * a.x + w[1] * b.x + w[2] * c.x, w[0] * a.y + w[1] * b.y + w[2] * c.y);
}

std::array<Rational, 3> cross(const Point3& a, const Point3& b, const Point3& c) {
  const Rational ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
  const Rational vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
  return {uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
}

}  // namespace dhopf
