#include "kernelcat/io.hpp"

#include <sstream>

namespace krn::io {

void parse_failure(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

std::size_t parse_count(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || n == 0 || n > (1ull << 24)) parse_failure(line, "bad count '" + token + "'");
  return static_cast<std::size_t>(n);
}

std::vector<std::string> RecordReader::expect(const std::string& keyword, std::size_t operands) {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    std::istringstream fields(text);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.front() != keyword) parse_failure(line_, "expected '" + keyword + "', found '" + tokens.front() + "'");
    if (tokens.size() != operands + 1) {
      parse_failure(line_, "'" + keyword + "' takes " + std::to_string(operands) + " values, found " +
                               std::to_string(tokens.size() - 1));
    }
    return tokens;
  }
  parse_failure(line_ + 1, "unexpected end of input, expected '" + keyword + "'");
}

}  // namespace krn::io
