#include "kernelcat/random_var.hpp"

namespace krn {

LnExponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return LnExponent::infinity();
  std::size_t used = 0;
  unsigned long n = 0;
  try {
    n = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n == 0 || n > 64) {
    throw Error(ErrorCode::ParseError, "L^n exponent must be 1..64 or inf, got '" + text + "'");
  }
  return LnExponent(static_cast<unsigned>(n));
}

std::string to_string(VectorNorm norm) {
  switch (norm) {
    case VectorNorm::Euclidean: return "euclidean";
    case VectorNorm::Max: return "max";
    case VectorNorm::One: return "one";
  }
  return "euclidean";
}

VectorNorm parse_vector_norm(const std::string& text) {
  if (text == "euclidean" || text == "2") return VectorNorm::Euclidean;
  if (text == "max" || text == "sup" || text == "inf") return VectorNorm::Max;
  if (text == "one" || text == "1") return VectorNorm::One;
  throw Error(ErrorCode::ParseError, "unknown vector norm '" + text + "' (euclidean, max, one)");
}

}  // namespace krn
