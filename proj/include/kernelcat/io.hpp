#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kernelcat/kernel.hpp"
#include "kernelcat/random_var.hpp"

// Plain-text matrix format. One record per line, `#` starts a comment line.
//
//   space <n>                    kernel <rows> <cols>
//   weights w_0 ... w_{n-1}      domain p_0 ... p_{rows-1}
//                                codomain q_0 ... q_{cols-1}
//                                row k_00 ... k_0(cols-1)     (rows times)
//
//   rv <n>                       vrv <n> <dim>
//   weights w_0 ... w_{n-1}      weights w_0 ... w_{n-1}
//   values f_0 ... f_{n-1}       value g_00 ... g_0(dim-1)    (n times)
//
// Scalars are written as `num/den` in rational mode and as 17-digit decimals
// in float mode; both modes read either form.

namespace krn::io {

/// Tokenized records with their 1-based line numbers.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  /// Next non-comment record; throws ParseError at end of input.
  std::vector<std::string> expect(const std::string& keyword, std::size_t operands);
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

[[noreturn]] void parse_failure(std::size_t line, const std::string& message);
std::size_t parse_count(const std::string& token, std::size_t line);

template <class Scalar, class Derived>
void write_scalars(std::ostream& out, const char* keyword, const Eigen::MatrixBase<Derived>& values) {
  out << keyword;
  for (Index i = 0; i < values.size(); ++i) out << ' ' << format_scalar(Scalar(values(i)));
  out << '\n';
}

template <class Scalar>
Vector<Scalar> read_scalars(RecordReader& reader, const std::string& keyword, std::size_t count) {
  const auto tokens = reader.expect(keyword, count);
  Vector<Scalar> v(static_cast<Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    try {
      v[static_cast<Index>(i)] = parse_scalar<Scalar>(tokens[i + 1]);
    } catch (const Error& e) {
      parse_failure(reader.line(), e.what());
    }
  }
  return v;
}

template <class Scalar>
void write_space(std::ostream& out, const ProbSpace<Scalar>& s) {
  out << "space " << s.size() << '\n';
  write_scalars<Scalar>(out, "weights", s.weights());
}

template <class Scalar>
ProbSpace<Scalar> read_space(std::istream& in, double tol = kDefaultTolerance) {
  RecordReader reader(in);
  const std::size_t n = parse_count(reader.expect("space", 1)[1], reader.line());
  return ProbSpace<Scalar>(read_scalars<Scalar>(reader, "weights", n), tol);
}

template <class Scalar>
void write_kernel(std::ostream& out, const Kernel<Scalar>& k) {
  out << "kernel " << k.rows().rows() << ' ' << k.rows().cols() << '\n';
  write_scalars<Scalar>(out, "domain", k.domain().weights());
  write_scalars<Scalar>(out, "codomain", k.codomain().weights());
  for (Index x = 0; x < k.rows().rows(); ++x) write_scalars<Scalar>(out, "row", k.rows().row(x));
}

template <class Scalar>
Kernel<Scalar> read_kernel(std::istream& in, double tol = kDefaultTolerance) {
  RecordReader reader(in);
  const auto header = reader.expect("kernel", 2);
  const std::size_t rows = parse_count(header[1], reader.line());
  const std::size_t cols = parse_count(header[2], reader.line());
  ProbSpace<Scalar> domain(read_scalars<Scalar>(reader, "domain", rows), tol);
  ProbSpace<Scalar> codomain(read_scalars<Scalar>(reader, "codomain", cols), tol);
  Matrix<Scalar> m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t x = 0; x < rows; ++x) m.row(static_cast<Index>(x)) = read_scalars<Scalar>(reader, "row", cols).transpose();
  return Kernel<Scalar>(std::move(domain), std::move(codomain), std::move(m));
}

template <class Scalar>
void write_rv(std::ostream& out, const RandomVar<Scalar>& f) {
  out << "rv " << f.size() << '\n';
  write_scalars<Scalar>(out, "weights", f.space().weights());
  write_scalars<Scalar>(out, "values", f.values());
}

template <class Scalar>
RandomVar<Scalar> read_rv(std::istream& in, double tol = kDefaultTolerance) {
  RecordReader reader(in);
  const std::size_t n = parse_count(reader.expect("rv", 1)[1], reader.line());
  ProbSpace<Scalar> space(read_scalars<Scalar>(reader, "weights", n), tol);
  return RandomVar<Scalar>(std::move(space), read_scalars<Scalar>(reader, "values", n));
}

template <class Scalar>
void write_vec_rv(std::ostream& out, const VecRandomVar<Scalar>& g) {
  out << "vrv " << g.size() << ' ' << g.dim() << '\n';
  write_scalars<Scalar>(out, "weights", g.space().weights());
  for (Index x = 0; x < g.size(); ++x) write_scalars<Scalar>(out, "value", g.values().row(x));
}

template <class Scalar>
VecRandomVar<Scalar> read_vec_rv(std::istream& in, double tol = kDefaultTolerance) {
  RecordReader reader(in);
  const auto header = reader.expect("vrv", 2);
  const std::size_t n = parse_count(header[1], reader.line());
  const std::size_t d = parse_count(header[2], reader.line());
  ProbSpace<Scalar> space(read_scalars<Scalar>(reader, "weights", n), tol);
  Matrix<Scalar> m(static_cast<Index>(n), static_cast<Index>(d));
  for (std::size_t x = 0; x < n; ++x) m.row(static_cast<Index>(x)) = read_scalars<Scalar>(reader, "value", d).transpose();
  return VecRandomVar<Scalar>(std::move(space), std::move(m));
}

}  // namespace krn::io
