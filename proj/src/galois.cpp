#include "prt/galois.hpp"

#include <bit>
#include <string>

namespace prt {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::OutOfRange: return "out of range";
    case Errc::NotIrreducible: return "polynomial not irreducible";
    case Errc::NoInverse: return "no inverse";
    case Errc::DegenerateGenerator: return "degenerate generator";
    case Errc::ZeroState: return "zero state";
    case Errc::InvalidConfig: return "invalid config";
    case Errc::PortConflict: return "port conflict";
    case Errc::UnsupportedStageCount: return "unsupported stage count";
    case Errc::Syntax: return "syntax error";
    case Errc::GeometryMismatch: return "geometry mismatch";
    case Errc::UniverseMismatch: return "universe mismatch";
    case Errc::EmptySchedule: return "empty schedule";
  }
  return "unknown";
}

int poly_degree(Poly p) noexcept { return static_cast<int>(std::bit_width(p)) - 1; }

std::uint64_t poly_clmul(Poly a, Poly b) noexcept {
  std::uint64_t acc = 0;
  std::uint64_t shifted = a;
  for (; b != 0; b >>= 1, shifted <<= 1) {
    if (b & 1U) acc ^= shifted;
  }
  return acc;
}

Poly poly_mod(std::uint64_t a, Poly modulus) {
  if (modulus == 0) throw Error(Errc::InvalidArgument, "polynomial division by zero");
  const int dm = poly_degree(modulus);
  for (int da = static_cast<int>(std::bit_width(a)) - 1; da >= dm; --da) {
    if ((a >> da) & 1U) a ^= std::uint64_t{modulus} << (da - dm);
  }
  return static_cast<Poly>(a);
}

bool poly_is_irreducible(Poly p) {
  const int deg = poly_degree(p);
  if (deg < 1) {
    throw Error(Errc::InvalidArgument, "irreducibility is undefined for constant polynomials");
  }
  for (Poly d = 2; poly_degree(d) <= deg / 2; ++d) {
    if (poly_mod(p, d) == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(unsigned m, Poly p) : m_(m), p_(p) {
  if (m < 1 || m > kMaxWidth) {
    throw Error(Errc::InvalidArgument, "field width must be in [1, 16], got " + std::to_string(m));
  }
  if (poly_degree(p) != static_cast<int>(m)) {
    throw Error(Errc::InvalidArgument, "reduction polynomial degree must equal m = " + std::to_string(m));
  }
  if (!poly_is_irreducible(p)) {
    throw Error(Errc::NotIrreducible, "reduction polynomial is reducible over GF(2)");
  }
}

Element gf_mul(const FieldSpec& field, Element a, Element b) noexcept {
  // Shift-and-add with interleaved reduction keeps every intermediate below 2^(m+1).
  const Element top = Element{1} << field.width();
  Element acc = 0;
  for (; b != 0; b >>= 1) {
    if (b & 1U) acc ^= a;
    a <<= 1;
    if (a & top) a ^= field.modulus();
  }
  return acc;
}

Element gf_inv(const FieldSpec& field, Element a) {
  if (a == 0) throw Error(Errc::NoInverse, "no inverse of zero");
  // a^(2^m - 2) by square-and-multiply.
  std::uint32_t e = field.size() - 2;
  Element result = 1;
  Element base = a;
  for (; e != 0; e >>= 1) {
    if (e & 1U) result = gf_mul(field, result, base);
    base = gf_mul(field, base, base);
  }
  return result;
}

std::uint32_t BitMatrix::row(unsigned i) const noexcept {
  std::uint32_t r = 0;
  for (unsigned c = 0; c < size; ++c) r |= ((columns[c] >> i) & 1U) << c;
  return r;
}

Element BitMatrix::apply(Element x) const noexcept {
  Element y = 0;
  for (unsigned c = 0; c < size; ++c) {
    if ((x >> c) & 1U) y ^= columns[c];
  }
  return y;
}

BitMatrix mul_by_const_matrix(const FieldSpec& field, Element c) {
  if (!field.contains(c)) throw Error(Errc::OutOfRange, "constant outside the field");
  BitMatrix mat;
  mat.size = field.width();
  mat.columns.reserve(mat.size);
  for (unsigned j = 0; j < mat.size; ++j) mat.columns.push_back(gf_mul(field, c, Element{1} << j));
  return mat;
}

}  // namespace prt
