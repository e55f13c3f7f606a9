#include "sbnmf/text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sbnmf/errors.hpp"

namespace sbn {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Line {
  std::string_view text;
  std::size_t number;  // 1-based
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back({text.substr(start), number});
      break;
    }
    lines.push_back({text.substr(start, end - start), number});
    start = end + 1;
    ++number;
  }
  return lines;
}

// Fields are separated by exactly one space.
std::vector<Token> split_fields(const Line& line) {
  std::vector<Token> tokens;
  if (line.text.empty()) {
    throw ParseError(line.number, 1, "empty line");
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.text.find(' ', start);
    const std::string_view field = line.text.substr(start, end == std::string_view::npos ? end : end - start);
    if (field.empty()) {
      throw ParseError(line.number, start + 1, "expected a field (fields are separated by single spaces)");
    }
    tokens.push_back({field, start + 1});
    if (end == std::string_view::npos) {
      break;
    }
    start = end + 1;
  }
  return tokens;
}

void expect_fields(const Line& line, const std::vector<Token>& tokens, std::size_t count, const char* shape) {
  if (tokens.size() != count) {
    const std::size_t column = tokens.size() > count ? tokens[count].column : line.text.size() + 1;
    throw ParseError(line.number, column, std::string("expected \"") + shape + "\"");
  }
}

void expect_literal(const Line& line, const Token& token, std::string_view literal) {
  if (token.text != literal) {
    throw ParseError(line.number, token.column,
                     "expected \"" + std::string(literal) + "\", found \"" + std::string(token.text) + "\"");
  }
}

std::size_t parse_count(const Line& line, const Token& token) {
  std::size_t value = 0;
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line.number, token.column, "expected a non-negative integer, found \"" + std::string(token.text) + "\"");
  }
  return value;
}

double parse_real(const Line& line, const Token& token) {
  double value = 0.0;
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line.number, token.column, "expected a real number, found \"" + std::string(token.text) + "\"");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line.number, token.column, "number is not finite");
  }
  return value;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

SigmoidBeliefNetwork parse_network(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(1, 1, "expected \"SBN 1\"");
  }
  auto header = split_fields(lines[0]);
  expect_fields(lines[0], header, 2, "SBN 1");
  expect_literal(lines[0], header[0], "SBN");
  expect_literal(lines[0], header[1], "1");

  if (lines.size() < 2) {
    throw ParseError(2, 1, "expected \"N <n_nodes>\"");
  }
  auto size_line = split_fields(lines[1]);
  expect_fields(lines[1], size_line, 2, "N <n_nodes>");
  expect_literal(lines[1], size_line[0], "N");
  const std::size_t n = parse_count(lines[1], size_line[1]);

  std::vector<double> biases(n);
  std::size_t cursor = 2;
  for (std::size_t i = 0; i < n; ++i, ++cursor) {
    if (cursor >= lines.size()) {
      throw ParseError(cursor + 1, 1, "expected \"H " + std::to_string(i) + " <bias>\"");
    }
    const Line& line = lines[cursor];
    auto f = split_fields(line);
    expect_fields(line, f, 3, "H <i> <bias>");
    expect_literal(line, f[0], "H");
    if (parse_count(line, f[1]) != i) {
      throw ParseError(line.number, f[1].column, "expected bias for node " + std::to_string(i));
    }
    biases[i] = parse_real(line, f[2]);
  }

  std::vector<Edge> edges;
  for (; cursor < lines.size(); ++cursor) {
    const Line& line = lines[cursor];
    auto f = split_fields(line);
    expect_fields(line, f, 4, "J <i> <j> <weight>");
    expect_literal(line, f[0], "J");
    const std::size_t child = parse_count(line, f[1]);
    const std::size_t parent = parse_count(line, f[2]);
    if (child >= n) {
      throw ParseError(line.number, f[1].column, "node " + std::to_string(child) + " is outside the network");
    }
    if (parent >= child) {
      throw ParseError(line.number, f[2].column, "parent index must be lower than child index");
    }
    if (!edges.empty()) {
      const Edge& prev = edges.back();
      if (prev.child == child && prev.parent == parent) {
        throw ParseError(line.number, f[1].column, "duplicate edge");
      }
      if (prev.child > child || (prev.child == child && prev.parent > parent)) {
        throw ParseError(line.number, f[1].column, "edges must be sorted by (child, parent)");
      }
    }
    edges.push_back({child, parent, parse_real(line, f[3])});
  }
  return SigmoidBeliefNetwork(std::move(biases), std::move(edges));
}

std::string emit_network(const SigmoidBeliefNetwork& net) {
  std::string out = "SBN 1\nN " + std::to_string(net.size()) + "\n";
  for (NodeIndex i = 0; i < net.size(); ++i) {
    out += "H " + std::to_string(i) + " " + format_real(net.bias(i)) + "\n";
  }
  for (const Edge& e : net.edges()) {
    out += "J " + std::to_string(e.child) + " " + std::to_string(e.parent) + " " + format_real(e.weight) + "\n";
  }
  return out;
}

Evidence parse_evidence(std::string_view text) {
  Evidence evidence;
  for (const Line& line : split_lines(text)) {
    auto f = split_fields(line);
    expect_fields(line, f, 2, "<node-index> <0|1>");
    const std::size_t node = parse_count(line, f[0]);
    if (f[1].text != "0" && f[1].text != "1") {
      throw ParseError(line.number, f[1].column, "evidence value must be 0 or 1");
    }
    if (evidence.is_clamped(node)) {
      throw ParseError(line.number, f[0].column, "node " + std::to_string(node) + " clamped twice");
    }
    evidence.clamp(node, f[1].text == "1" ? 1 : 0);
  }
  return evidence;
}

std::string emit_evidence(const Evidence& evidence) {
  std::string out;
  for (const auto& [i, b] : evidence.clamped()) {
    out += std::to_string(i) + " " + (b ? "1" : "0") + "\n";
  }
  return out;
}

BitmapDataset parse_dataset(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(1, 1, "expected \"BITMAP 1\"");
  }
  auto header = split_fields(lines[0]);
  expect_fields(lines[0], header, 2, "BITMAP 1");
  expect_literal(lines[0], header[0], "BITMAP");
  expect_literal(lines[0], header[1], "1");
  if (lines.size() < 2) {
    throw ParseError(2, 1, "expected \"<rows> <cols> <count>\"");
  }
  auto dims = split_fields(lines[1]);
  expect_fields(lines[1], dims, 3, "<rows> <cols> <count>");
  const std::size_t rows = parse_count(lines[1], dims[0]);
  const std::size_t cols = parse_count(lines[1], dims[1]);
  const std::size_t count = parse_count(lines[1], dims[2]);
  if (rows == 0) {
    throw ParseError(2, dims[0].column, "rows must be positive");
  }
  if (cols == 0) {
    throw ParseError(2, dims[1].column, "cols must be positive");
  }
  if (lines.size() - 2 != count) {
    throw ParseError(lines.size() - 2 < count ? lines.size() + 1 : lines[2 + count].number, 1,
                     "header declares " + std::to_string(count) + " patterns, found " +
                         std::to_string(lines.size() - 2));
  }

  BitmapDataset data(rows, cols);
  for (std::size_t k = 0; k < count; ++k) {
    const Line& line = lines[2 + k];
    if (line.text.size() != rows * cols) {
      throw ParseError(line.number, std::min(line.text.size(), rows * cols) + 1,
                       "pattern has " + std::to_string(line.text.size()) + " characters, expected " +
                           std::to_string(rows * cols));
    }
    std::vector<Bit> pattern(rows * cols);
    for (std::size_t p = 0; p < pattern.size(); ++p) {
      const char c = line.text[p];
      if (c != '0' && c != '1') {
        throw ParseError(line.number, p + 1, "pattern characters must be 0 or 1");
      }
      pattern[p] = c == '1' ? 1 : 0;
    }
    data.add(std::move(pattern));
  }
  return data;
}

std::string emit_dataset(const BitmapDataset& data) {
  std::string out = "BITMAP 1\n" + std::to_string(data.rows()) + " " + std::to_string(data.cols()) + " " +
                    std::to_string(data.size()) + "\n";
  for (std::size_t k = 0; k < data.size(); ++k) {
    for (Bit b : data.pattern(k)) {
      out += b ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path + " for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading " + path);
  }
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("error while writing " + path);
  }
}

}  // namespace sbn
