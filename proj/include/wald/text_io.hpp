#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace wald {

/// Malformed text input. what() reads "line N: <message>" when a line is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  explicit ParseError(const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

struct TokenLine {
  std::size_t line = 0;  // 1-based
  std::vector<std::string> tokens;
};

/// Splits on newlines, strips `#` comments, drops blank lines, and splits
/// the rest on whitespace.
std::vector<TokenLine> tokenize(std::string_view text);

double parse_real(const std::string& token, std::size_t line);
long parse_integer(const std::string& token, std::size_t line);

std::string read_text_file(const std::string& path);

/// Matrix text format: first line `k`, then k rows of k whitespace-separated
/// reals. `#` comments allowed.
Eigen::MatrixXd parse_matrix(const std::string& text);
Eigen::MatrixXd read_matrix_file(const std::string& path);
std::string format_matrix(const Eigen::MatrixXd& m);

/// Shortest decimal string that round-trips to the same double.
std::string format_real(double x);

}  // namespace wald
