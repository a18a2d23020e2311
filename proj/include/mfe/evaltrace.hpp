// Matrices over R, C and the quaternions, block extraction, and evaluation of
// diagram statistics through the cycle trace formula.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <variant>
#include <vector>

#include "mfe/brauer.hpp"

namespace mfe {

enum class Field { R, C, H };

// Real dimension of the scalar field: 1, 2 or 4.
int beta(Field f);
const char* field_name(Field f);
Field parse_field(const std::string& s);

using Complex = std::complex<double>;

// Quaternion matrix stored as four real component matrices: a + b i + c j + d k.
struct QuatMatrix {
  Eigen::MatrixXd a, b, c, d;

  QuatMatrix() = default;
  QuatMatrix(Eigen::Index rows, Eigen::Index cols);
  static QuatMatrix identity(Eigen::Index n);

  Eigen::Index rows() const { return a.rows(); }
  Eigen::Index cols() const { return a.cols(); }
  QuatMatrix operator*(const QuatMatrix& o) const;
  QuatMatrix operator+(const QuatMatrix& o) const;
  QuatMatrix operator*(double s) const;
  QuatMatrix adjoint() const;  // quaternionic conjugate transpose
  QuatMatrix block(Eigen::Index r0, Eigen::Index c0, Eigen::Index nr, Eigen::Index nc) const;
  double re_trace() const { return a.trace(); }

  // Complex 2n x 2n representation [[Z, W], [-conj(W), conj(Z)]] with
  // Z = a + i b and W = c + i d.
  Eigen::MatrixXcd to_complex() const;
  static QuatMatrix from_complex(const Eigen::MatrixXcd& m);
};

using FieldMatrix = std::variant<Eigen::MatrixXd, Eigen::MatrixXcd, QuatMatrix>;

Field field_of(const FieldMatrix& m);
Eigen::Index rows(const FieldMatrix& m);
Eigen::Index cols(const FieldMatrix& m);
FieldMatrix identity_matrix(Field f, Eigen::Index n);
FieldMatrix zero_matrix(Field f, Eigen::Index rows, Eigen::Index cols);
FieldMatrix multiply(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix add(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix scale(const FieldMatrix& x, double s);
// Adjoint over the field (transpose for R, conjugate transpose for C and H).
FieldMatrix adjoint(const FieldMatrix& x);
// The bracket inverse convention: plain transpose for R and C, adjoint for H.
FieldMatrix bracket_transpose(const FieldMatrix& x);
FieldMatrix sub_block(const FieldMatrix& x, Eigen::Index r0, Eigen::Index c0, Eigen::Index nr,
                      Eigen::Index nc);
// Trace for R and C; real part of the trace for H.
Complex field_trace(const FieldMatrix& x);
// max |entry| of x - y (component-wise for quaternions).
double max_abs_diff(const FieldMatrix& x, const FieldMatrix& y);
// max-norm of X* X - I.
double unitarity_defect(const FieldMatrix& x);

// A square matrix with a block grid induced by integer dimensions per colour.
struct BlockMatrix {
  FieldMatrix entries;
  std::vector<int> dims;

  BlockMatrix() = default;
  BlockMatrix(FieldMatrix m, std::vector<int> d);
  Field field() const { return field_of(entries); }
  int offset(int colour) const;
  // Block (row colour, column colour) of shape d_row x d_col.
  FieldMatrix block(int row_colour, int col_colour) const;
};

DimensionFunction dimension_function(const std::vector<int>& dims);

// Product over the oriented loops (i_1 ... i_m) of
// Tr([A_{i_1}(c(i_1), c(i_1'))]^{s(i_1)} ... [A_{i_m}(c(i_m), c(i_m'))]^{s(i_m)}),
// with Re∘Tr over the quaternions. An empty orientation means canonical.
Complex eval_cycle_trace(const ColouredDiagram& b, const Orientation& s,
                         const std::vector<BlockMatrix>& mats);

// eval_cycle_trace / Π_c d_c^{fnc_c}; loop variables of x contribute their
// dimensions to the numerator and to fnc, so they cancel.
Complex m_stat(const ExtendedDiagram& x, const std::vector<BlockMatrix>& mats);
Complex m_stat(const ColouredDiagram& b, const std::vector<BlockMatrix>& mats);

}  // namespace mfe
