#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdca {

/// Error raised while reading a dataset from text. Message carries the
/// 1-based line number of the offending line.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse d-by-n matrix stored by columns (one column per sample).
/// Row indices within a column are strictly increasing.
struct SparseColumnMatrix {
  std::size_t rows = 0;                 // d
  std::vector<std::size_t> col_ptr;     // size n+1, col_ptr[0] == 0
  std::vector<std::size_t> row_index;   // size nnz
  std::vector<double> values;           // size nnz

  std::size_t cols() const { return col_ptr.empty() ? 0 : col_ptr.size() - 1; }
  std::size_t nnz() const { return values.size(); }

  std::span<const std::size_t> column_rows(std::size_t j) const {
    return {row_index.data() + col_ptr[j], col_ptr[j + 1] - col_ptr[j]};
  }
  std::span<const double> column_values(std::size_t j) const {
    return {values.data() + col_ptr[j], col_ptr[j + 1] - col_ptr[j]};
  }

  /// Checks structural invariants (index ranges, ordering). Throws on violation.
  void validate() const;
};

/// A problem instance: matrix A, labels y, cached squared column norms v.
struct Dataset {
  SparseColumnMatrix matrix;
  std::vector<double> labels;  // size n
  std::vector<double> norms;   // size n, norms[i] = A_i' A_i

  std::size_t n() const { return matrix.cols(); }
  std::size_t d() const { return matrix.rows; }
};

/// norms[i] = sum of squares of column i's stored values.
std::vector<double> squared_column_norms(const SparseColumnMatrix& m);

/// A_i' w.
double column_dot(const SparseColumnMatrix& m, std::size_t i,
                  std::span<const double> w);

/// w += c * A_i (scatter into the stored rows only).
void add_scaled_column(const SparseColumnMatrix& m, std::size_t i, double c,
                       std::span<double> w);

/// Reads LIBSVM text: one sample per non-empty line,
/// `<label> <index>:<value> ...` with 1-based strictly increasing indices.
/// d is the maximum index seen unless d_override > 0 is given.
Dataset parse_libsvm(std::istream& in, std::size_t d_override = 0);
Dataset parse_libsvm(const std::string& text, std::size_t d_override = 0);
Dataset load_libsvm_file(const std::string& path, std::size_t d_override = 0);

/// Writes the dataset back in LIBSVM text form. Values are printed with
/// shortest round-trip precision, so parse(write(ds)) == ds.
void write_libsvm(const Dataset& ds, std::ostream& out);
std::string write_libsvm(const Dataset& ds);

enum class LabelMode { regression, binary };

struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  double density = 1.0;       // fraction of rows populated per column, (0,1]
  double norm_spread = 1.0;   // ||A_i|| spans [1, norm_spread] geometrically in i
  LabelMode label_mode = LabelMode::regression;
  std::uint64_t seed = 1;
};

/// Random sparse instance with controlled column-norm heterogeneity:
/// each column gets ceil(density*d) standard-normal entries at distinct rows,
/// then is rescaled so that ||A_i|| = norm_spread^(i/(n-1)). Labels are
/// y = A'w_planted + 0.1*noise (regression) or its sign (binary).
/// Deterministic for a fixed seed (mt19937_64).
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace sdca
