#include "localmath/scaled_numbers.hpp"

#include <limits>

namespace localmath {

NaturalStructure::NaturalStructure(std::uint64_t n) : n_(n) {
  if (n == 0) fail(ErrorCode::InvalidScale, "natural structure requires n >= 1");
}

namespace {
void require_member(const NaturalStructure& structure, std::uint64_t m) {
  if (!structure.contains(m))
    fail(ErrorCode::NotInBaseSet, std::to_string(m) + " is not a multiple of " +
                                      std::to_string(structure.n()));
}
}  // namespace

Rational valuation_natural(const NaturalStructure& structure, std::uint64_t m) {
  require_member(structure, m);
  return Rational(m / structure.n());
}

std::uint64_t natural_op(const NaturalStructure& structure, NaturalOp op, std::uint64_t m1,
                         std::uint64_t m2) {
  require_member(structure, m1);
  require_member(structure, m2);
  std::uint64_t out = 0;
  switch (op) {
    case NaturalOp::add:
      if (__builtin_add_overflow(m1, m2, &out)) fail(ErrorCode::Overflow, "natural_op add");
      return out;
    case NaturalOp::mul:
      // (m1/n) * m2 is exact because n divides m1.
      if (__builtin_mul_overflow(m1 / structure.n(), m2, &out)) fail(ErrorCode::Overflow, "natural_op mul");
      return out;
  }
  fail(ErrorCode::InvalidArgument, "unknown NaturalOp");
}

std::string to_string(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "add";
    case ArithOp::sub: return "sub";
    case ArithOp::mul: return "mul";
    case ArithOp::div: return "div";
  }
  return "?";
}

}  // namespace localmath
