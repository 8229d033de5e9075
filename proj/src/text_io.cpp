#include "wald/text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wald {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

ParseError::ParseError(const std::string& message) : std::runtime_error(message) {}

std::vector<TokenLine> tokenize(std::string_view text) {
  std::vector<TokenLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::istringstream in{std::string(line)};
    TokenLine tl{line_no, {}};
    for (std::string tok; in >> tok;) tl.tokens.push_back(tok);
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

double parse_real(const std::string& token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "expected a real number, got '" + token + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + token + "'");
  return value;
}

long parse_integer(const std::string& token, std::size_t line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected an integer, got '" + token + "'");
  }
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty matrix input");
  const auto& head = lines.front();
  if (head.tokens.size() != 1) {
    throw ParseError(head.line, "first line must hold the dimension k");
  }
  const long k = parse_integer(head.tokens[0], head.line);
  if (k < 1) throw ParseError(head.line, "dimension must be positive");
  if (static_cast<long>(lines.size()) - 1 != k) {
    const std::size_t where = lines.size() > static_cast<std::size_t>(k)
                                  ? lines[static_cast<std::size_t>(k) + 1].line
                                  : lines.back().line;
    throw ParseError(where, "expected " + std::to_string(k) + " matrix rows, found " +
                                std::to_string(lines.size() - 1));
  }
  Eigen::MatrixXd m(k, k);
  for (long r = 0; r < k; ++r) {
    const auto& row = lines[static_cast<std::size_t>(r) + 1];
    if (static_cast<long>(row.tokens.size()) != k) {
      throw ParseError(row.line, "expected " + std::to_string(k) + " entries, found " +
                                     std::to_string(row.tokens.size()));
    }
    for (long c = 0; c < k; ++c) m(r, c) = parse_real(row.tokens[c], row.line);
  }
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  try {
    return parse_matrix(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out = std::to_string(m.rows()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += format_real(m(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace wald
