#pragma once

#include <cstdint>
#include <vector>

#include "prt/error.hpp"

namespace prt {

/// Element of GF(2^m) in the standard polynomial basis: bit i is the coefficient of z^i.
using Element = std::uint32_t;

/// Polynomial over GF(2), little-endian coefficient bitmask (bit i = coefficient of z^i).
using Poly = std::uint32_t;

inline constexpr unsigned kMaxWidth = 16;

/// Degree of p, or -1 for the zero polynomial.
int poly_degree(Poly p) noexcept;

/// Carry-less product of two polynomials of degree < 32.
std::uint64_t poly_clmul(Poly a, Poly b) noexcept;

/// Remainder of a modulo a nonzero modulus.
Poly poly_mod(std::uint64_t a, Poly modulus);

/// Trial division by every polynomial of degree 1..deg(p)/2.
/// Throws Errc::InvalidArgument for constants (degree < 1).
bool poly_is_irreducible(Poly p);

/// The field GF(2^m) fixed by its word width and an irreducible reduction polynomial.
class FieldSpec {
 public:
  /// Throws Errc::InvalidArgument if m is outside [1, 16] or deg(p) != m,
  /// and Errc::NotIrreducible if p factors over GF(2).
  FieldSpec(unsigned m, Poly p);

  /// GF(2) itself, p(z) = z + 1.
  static FieldSpec binary() { return FieldSpec(1, 0b11); }

  unsigned width() const noexcept { return m_; }
  Poly modulus() const noexcept { return p_; }
  Element mask() const noexcept { return (Element{1} << m_) - 1; }
  std::uint32_t size() const noexcept { return std::uint32_t{1} << m_; }
  bool contains(Element x) const noexcept { return x <= mask(); }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  unsigned m_;
  Poly p_;
};

inline Element gf_add(Element a, Element b) noexcept { return a ^ b; }

Element gf_mul(const FieldSpec& field, Element a, Element b) noexcept;

/// Multiplicative inverse; throws Errc::NoInverse for zero.
Element gf_inv(const FieldSpec& field, Element a);

/// m x m matrix over GF(2), stored column-wise; column j is the image of z^j.
struct BitMatrix {
  unsigned size = 0;
  std::vector<std::uint32_t> columns;

  /// Row i as a bitmask over input positions.
  std::uint32_t row(unsigned i) const noexcept;
  bool at(unsigned r, unsigned c) const noexcept { return (columns[c] >> r) & 1U; }
  Element apply(Element x) const noexcept;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;
};

/// Matrix M with M * x = c * x for every x in the field.
BitMatrix mul_by_const_matrix(const FieldSpec& field, Element c);

}  // namespace prt
