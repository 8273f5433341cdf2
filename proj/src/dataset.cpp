#include "sdca/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sdca {

void SparseColumnMatrix::validate() const {
  if (rows == 0) throw std::invalid_argument("matrix: d must be >= 1");
  if (cols() == 0) throw std::invalid_argument("matrix: n must be >= 1");
  if (col_ptr.front() != 0 || col_ptr.back() != values.size() ||
      row_index.size() != values.size())
    throw std::invalid_argument("matrix: inconsistent storage");
  for (std::size_t j = 0; j + 1 < col_ptr.size(); ++j) {
    if (col_ptr[j] > col_ptr[j + 1])
      throw std::invalid_argument("matrix: col_ptr not nondecreasing");
    for (std::size_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      if (row_index[k] >= rows)
        throw std::out_of_range("matrix: row index out of range");
      if (k > col_ptr[j] && row_index[k - 1] >= row_index[k])
        throw std::invalid_argument("matrix: row indices not strictly increasing");
    }
  }
}

std::vector<double> squared_column_norms(const SparseColumnMatrix& m) {
  std::vector<double> v(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (double x : m.column_values(j)) s += x * x;
    v[j] = s;
  }
  return v;
}

double column_dot(const SparseColumnMatrix& m, std::size_t i,
                  std::span<const double> w) {
  if (i >= m.cols()) throw std::out_of_range("column_dot: column index");
  auto rows = m.column_rows(i);
  auto vals = m.column_values(i);
  double s = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) s += vals[k] * w[rows[k]];
  return s;
}

void add_scaled_column(const SparseColumnMatrix& m, std::size_t i, double c,
                       std::span<double> w) {
  if (i >= m.cols()) throw std::out_of_range("add_scaled_column: column index");
  auto rows = m.column_rows(i);
  auto vals = m.column_values(i);
  for (std::size_t k = 0; k < rows.size(); ++k) w[rows[k]] += c * vals[k];
}

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw parse_error("libsvm parse error at line " + std::to_string(line_no) +
                    ": " + what);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail_line(line_no, "malformed number '" + std::string(tok) + "'");
  return x;
}

std::size_t parse_index(std::string_view tok, std::size_t line_no) {
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || idx == 0)
    fail_line(line_no, "malformed index '" + std::string(tok) + "'");
  return idx;
}

void format_double(std::string& out, double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, r.ptr);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::size_t d_override) {
  Dataset ds;
  auto& m = ds.matrix;
  m.col_ptr.push_back(0);
  std::size_t max_index = 0;  // 1-based
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;  // blank line
    // label
    std::size_t end = line.find_first_of(" \t\r", pos);
    std::string_view label_tok(line.data() + pos,
                               (end == std::string::npos ? line.size() : end) - pos);
    ds.labels.push_back(parse_double(label_tok, line_no));
    std::size_t prev_index = 0;
    pos = end;
    while (pos != std::string::npos) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string::npos) break;
      end = line.find_first_of(" \t\r", pos);
      std::string_view tok(line.data() + pos,
                           (end == std::string::npos ? line.size() : end) - pos);
      std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos)
        fail_line(line_no, "expected index:value, got '" + std::string(tok) + "'");
      std::size_t idx = parse_index(tok.substr(0, colon), line_no);
      double val = parse_double(tok.substr(colon + 1), line_no);
      if (idx <= prev_index)
        fail_line(line_no, "indices not strictly increasing at index " +
                               std::to_string(idx));
      prev_index = idx;
      max_index = std::max(max_index, idx);
      m.row_index.push_back(idx - 1);
      m.values.push_back(val);
      pos = end;
    }
    m.col_ptr.push_back(m.values.size());
  }
  if (ds.labels.empty()) throw parse_error("libsvm parse error: empty input");
  if (d_override > 0) {
    if (max_index > d_override)
      throw parse_error("libsvm parse error: index " + std::to_string(max_index) +
                        " exceeds dimension override " + std::to_string(d_override));
    m.rows = d_override;
  } else {
    if (max_index == 0)
      throw parse_error("libsvm parse error: no features present and no "
                        "dimension override given");
    m.rows = max_index;
  }
  ds.norms = squared_column_norms(m);
  m.validate();
  return ds;
}

Dataset parse_libsvm(const std::string& text, std::size_t d_override) {
  std::istringstream in(text);
  return parse_libsvm(in, d_override);
}

Dataset load_libsvm_file(const std::string& path, std::size_t d_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_libsvm(in, d_override);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  std::string line;
  for (std::size_t j = 0; j < ds.n(); ++j) {
    line.clear();
    format_double(line, ds.labels[j]);
    auto rows = ds.matrix.column_rows(j);
    auto vals = ds.matrix.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      line += ' ';
      line += std::to_string(rows[k] + 1);
      line += ':';
      format_double(line, vals[k]);
    }
    line += '\n';
    out << line;
  }
}

std::string write_libsvm(const Dataset& ds) {
  std::ostringstream out;
  write_libsvm(ds, out);
  return out.str();
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1)
    throw std::invalid_argument("generate_synthetic: n and d must be >= 1");
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw std::invalid_argument("generate_synthetic: density must be in (0,1]");
  if (!(spec.norm_spread > 0.0))
    throw std::invalid_argument("generate_synthetic: norm_spread must be positive");
  if (spec.density * static_cast<double>(spec.d) < 1.0)
    throw std::invalid_argument("generate_synthetic: density*d < 1");
  const std::size_t per_col =
      static_cast<std::size_t>(std::ceil(spec.density * static_cast<double>(spec.d)));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset ds;
  auto& m = ds.matrix;
  m.rows = spec.d;
  m.col_ptr.reserve(spec.n + 1);
  m.col_ptr.push_back(0);
  m.row_index.reserve(spec.n * per_col);
  m.values.reserve(spec.n * per_col);

  std::vector<std::size_t> pool(spec.d);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> picked(per_col);
  std::vector<double> col(per_col);

  for (std::size_t j = 0; j < spec.n; ++j) {
    // distinct rows via partial Fisher-Yates
    for (std::size_t k = 0; k < per_col; ++k) {
      std::size_t r = k + static_cast<std::size_t>(rng() % (spec.d - k));
      std::swap(pool[k], pool[r]);
      picked[k] = pool[k];
    }
    std::sort(picked.begin(), picked.end());
    double sq = 0.0;
    for (std::size_t k = 0; k < per_col; ++k) {
      col[k] = normal(rng);
      sq += col[k] * col[k];
    }
    if (sq == 0.0) {  // unreachable in practice; keeps the rescale well defined
      col[0] = 1.0;
      sq = 1.0;
    }
    const double frac =
        spec.n > 1 ? static_cast<double>(j) / static_cast<double>(spec.n - 1) : 0.0;
    const double target = std::pow(spec.norm_spread, frac);
    const double scale = target / std::sqrt(sq);
    for (std::size_t k = 0; k < per_col; ++k) {
      m.row_index.push_back(picked[k]);
      m.values.push_back(col[k] * scale);
    }
    m.col_ptr.push_back(m.values.size());
  }

  std::vector<double> planted(spec.d);
  for (auto& x : planted) x = normal(rng);
  ds.labels.resize(spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    double z = column_dot(m, j, planted) + 0.1 * normal(rng);
    ds.labels[j] = spec.label_mode == LabelMode::binary ? (z >= 0.0 ? 1.0 : -1.0) : z;
  }
  ds.norms = squared_column_norms(m);
  m.validate();
  return ds;
}

}  // namespace sdca
