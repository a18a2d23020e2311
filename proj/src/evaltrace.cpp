#include "mfe/evaltrace.hpp"

#include <stdexcept>
#include <string>

namespace mfe {

int beta(Field f) {
  switch (f) {
    case Field::R: return 1;
    case Field::C: return 2;
    case Field::H: return 4;
  }
  return 0;
}

const char* field_name(Field f) {
  switch (f) {
    case Field::R: return "R";
    case Field::C: return "C";
    case Field::H: return "H";
  }
  return "?";
}

Field parse_field(const std::string& s) {
  if (s == "R" || s == "r") return Field::R;
  if (s == "C" || s == "c") return Field::C;
  if (s == "H" || s == "h") return Field::H;
  throw std::invalid_argument("unknown field '" + s + "' (expected R, C or H)");
}

// ------------------------------------------------------------ QuatMatrix

QuatMatrix::QuatMatrix(Eigen::Index rows, Eigen::Index cols)
    : a(Eigen::MatrixXd::Zero(rows, cols)),
      b(Eigen::MatrixXd::Zero(rows, cols)),
      c(Eigen::MatrixXd::Zero(rows, cols)),
      d(Eigen::MatrixXd::Zero(rows, cols)) {}

QuatMatrix QuatMatrix::identity(Eigen::Index n) {
  QuatMatrix q(n, n);
  q.a.setIdentity();
  return q;
}

QuatMatrix QuatMatrix::operator*(const QuatMatrix& o) const {
  if (cols() != o.rows()) throw std::invalid_argument("quaternion product: shape mismatch");
  QuatMatrix r;
  r.a = a * o.a - b * o.b - c * o.c - d * o.d;
  r.b = a * o.b + b * o.a + c * o.d - d * o.c;
  r.c = a * o.c - b * o.d + c * o.a + d * o.b;
  r.d = a * o.d + b * o.c - c * o.b + d * o.a;
  return r;
}

QuatMatrix QuatMatrix::operator+(const QuatMatrix& o) const {
  QuatMatrix r;
  r.a = a + o.a;
  r.b = b + o.b;
  r.c = c + o.c;
  r.d = d + o.d;
  return r;
}

QuatMatrix QuatMatrix::operator*(double s) const {
  QuatMatrix r;
  r.a = a * s;
  r.b = b * s;
  r.c = c * s;
  r.d = d * s;
  return r;
}

QuatMatrix QuatMatrix::adjoint() const {
  QuatMatrix r;
  r.a = a.transpose();
  r.b = -b.transpose();
  r.c = -c.transpose();
  r.d = -d.transpose();
  return r;
}

QuatMatrix QuatMatrix::block(Eigen::Index r0, Eigen::Index c0, Eigen::Index nr, Eigen::Index nc) const {
  QuatMatrix r;
  r.a = a.block(r0, c0, nr, nc);
  r.b = b.block(r0, c0, nr, nc);
  r.c = c.block(r0, c0, nr, nc);
  r.d = d.block(r0, c0, nr, nc);
  return r;
}

Eigen::MatrixXcd QuatMatrix::to_complex() const {
  const Eigen::Index n = rows(), m = cols();
  Eigen::MatrixXcd out(2 * n, 2 * m);
  const Complex I(0, 1);
  Eigen::MatrixXcd z = a.cast<Complex>() + I * b.cast<Complex>();
  Eigen::MatrixXcd w = c.cast<Complex>() + I * d.cast<Complex>();
  out.topLeftCorner(n, m) = z;
  out.topRightCorner(n, m) = w;
  out.bottomLeftCorner(n, m) = -w.conjugate();
  out.bottomRightCorner(n, m) = z.conjugate();
  return out;
}

QuatMatrix QuatMatrix::from_complex(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows() / 2, k = m.cols() / 2;
  QuatMatrix q;
  q.a = m.topLeftCorner(n, k).real();
  q.b = m.topLeftCorner(n, k).imag();
  q.c = m.topRightCorner(n, k).real();
  q.d = m.topRightCorner(n, k).imag();
  return q;
}

// ----------------------------------------------------------- FieldMatrix

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

template <class F>
FieldMatrix binary(const FieldMatrix& x, const FieldMatrix& y, F&& f) {
  if (x.index() != y.index()) throw std::invalid_argument("field mismatch between matrices");
  switch (x.index()) {
    case 0: return FieldMatrix(f(std::get<0>(x), std::get<0>(y)));
    case 1: return FieldMatrix(f(std::get<1>(x), std::get<1>(y)));
    default: return FieldMatrix(f(std::get<2>(x), std::get<2>(y)));
  }
}

}  // namespace

Field field_of(const FieldMatrix& m) {
  switch (m.index()) {
    case 0: return Field::R;
    case 1: return Field::C;
    default: return Field::H;
  }
}

Eigen::Index rows(const FieldMatrix& m) {
  return std::visit([](const auto& x) { return x.rows(); }, m);
}

Eigen::Index cols(const FieldMatrix& m) {
  return std::visit([](const auto& x) { return x.cols(); }, m);
}

FieldMatrix identity_matrix(Field f, Eigen::Index n) {
  switch (f) {
    case Field::R: return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
    case Field::C: return Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n, n));
    case Field::H: return QuatMatrix::identity(n);
  }
  throw std::logic_error("unknown field");
}

FieldMatrix zero_matrix(Field f, Eigen::Index r, Eigen::Index c) {
  switch (f) {
    case Field::R: return Eigen::MatrixXd(Eigen::MatrixXd::Zero(r, c));
    case Field::C: return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(r, c));
    case Field::H: return QuatMatrix(r, c);
  }
  throw std::logic_error("unknown field");
}

FieldMatrix multiply(const FieldMatrix& x, const FieldMatrix& y) {
  return binary(x, y, [](const auto& a, const auto& b) {
    using T = std::decay_t<decltype(a)>;
    if (a.cols() != b.rows()) throw std::invalid_argument("product: shape mismatch");
    return T(a * b);
  });
}

FieldMatrix add(const FieldMatrix& x, const FieldMatrix& y) {
  return binary(x, y, [](const auto& a, const auto& b) {
    using T = std::decay_t<decltype(a)>;
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("sum: shape mismatch");
    return T(a + b);
  });
}

FieldMatrix scale(const FieldMatrix& x, double s) {
  return std::visit([s](const auto& a) -> FieldMatrix {
    using T = std::decay_t<decltype(a)>;
    return T(a * s);
  }, x);
}

FieldMatrix adjoint(const FieldMatrix& x) {
  return std::visit(Overload{
                        [](const Eigen::MatrixXd& a) -> FieldMatrix { return Eigen::MatrixXd(a.transpose()); },
                        [](const Eigen::MatrixXcd& a) -> FieldMatrix { return Eigen::MatrixXcd(a.adjoint()); },
                        [](const QuatMatrix& a) -> FieldMatrix { return a.adjoint(); },
                    },
                    x);
}

FieldMatrix bracket_transpose(const FieldMatrix& x) {
  return std::visit(Overload{
                        [](const Eigen::MatrixXd& a) -> FieldMatrix { return Eigen::MatrixXd(a.transpose()); },
                        [](const Eigen::MatrixXcd& a) -> FieldMatrix { return Eigen::MatrixXcd(a.transpose()); },
                        [](const QuatMatrix& a) -> FieldMatrix { return a.adjoint(); },
                    },
                    x);
}

FieldMatrix sub_block(const FieldMatrix& x, Eigen::Index r0, Eigen::Index c0, Eigen::Index nr,
                      Eigen::Index nc) {
  if (r0 < 0 || c0 < 0 || r0 + nr > rows(x) || c0 + nc > cols(x))
    throw std::out_of_range("block outside the matrix");
  return std::visit(Overload{
                        [&](const Eigen::MatrixXd& a) -> FieldMatrix { return Eigen::MatrixXd(a.block(r0, c0, nr, nc)); },
                        [&](const Eigen::MatrixXcd& a) -> FieldMatrix { return Eigen::MatrixXcd(a.block(r0, c0, nr, nc)); },
                        [&](const QuatMatrix& a) -> FieldMatrix { return a.block(r0, c0, nr, nc); },
                    },
                    x);
}

Complex field_trace(const FieldMatrix& x) {
  if (rows(x) != cols(x)) throw std::invalid_argument("trace of a non-square matrix");
  return std::visit(Overload{
                        [](const Eigen::MatrixXd& a) { return Complex(a.trace(), 0.0); },
                        [](const Eigen::MatrixXcd& a) { return a.trace(); },
                        [](const QuatMatrix& a) { return Complex(a.re_trace(), 0.0); },
                    },
                    x);
}

double max_abs_diff(const FieldMatrix& x, const FieldMatrix& y) {
  if (x.index() != y.index()) throw std::invalid_argument("field mismatch between matrices");
  return std::visit(Overload{
                        [&](const Eigen::MatrixXd& a) { return (a - std::get<0>(y)).cwiseAbs().maxCoeff(); },
                        [&](const Eigen::MatrixXcd& a) { return (a - std::get<1>(y)).cwiseAbs().maxCoeff(); },
                        [&](const QuatMatrix& a) {
                          const auto& q = std::get<2>(y);
                          return std::max({(a.a - q.a).cwiseAbs().maxCoeff(), (a.b - q.b).cwiseAbs().maxCoeff(),
                                           (a.c - q.c).cwiseAbs().maxCoeff(), (a.d - q.d).cwiseAbs().maxCoeff()});
                        },
                    },
                    x);
}

double unitarity_defect(const FieldMatrix& x) {
  return max_abs_diff(multiply(adjoint(x), x), identity_matrix(field_of(x), rows(x)));
}

// ----------------------------------------------------------- BlockMatrix

BlockMatrix::BlockMatrix(FieldMatrix m, std::vector<int> d) : entries(std::move(m)), dims(std::move(d)) {
  long total = 0;
  for (int v : dims) {
    if (v <= 0) throw std::invalid_argument("block dimensions must be positive");
    total += v;
  }
  if (rows(entries) != total || cols(entries) != total)
    throw std::invalid_argument("dims inconsistent with the matrix size");
}

int BlockMatrix::offset(int colour) const {
  if (colour < 0 || colour >= static_cast<int>(dims.size())) throw std::out_of_range("colour out of range");
  int o = 0;
  for (int c = 0; c < colour; ++c) o += dims[c];
  return o;
}

FieldMatrix BlockMatrix::block(int row_colour, int col_colour) const {
  return sub_block(entries, offset(row_colour), offset(col_colour), dims.at(row_colour), dims.at(col_colour));
}

DimensionFunction dimension_function(const std::vector<int>& dims) {
  std::vector<Rational> d;
  for (int v : dims) d.emplace_back(v);
  return DimensionFunction(std::move(d));
}

// ------------------------------------------------------------ statistics

Complex eval_cycle_trace(const ColouredDiagram& b, const Orientation& s_in,
                         const std::vector<BlockMatrix>& mats) {
  const int k = b.k();
  if (static_cast<int>(mats.size()) != k) throw std::invalid_argument("need one matrix per slot");
  for (const auto& m : mats)
    if (m.dims != mats.front().dims) throw std::invalid_argument("matrices must share dims");
  const Orientation s = s_in.empty() ? canonical_orientation(b.pairing) : s_in;
  Complex value(1.0, 0.0);
  for (const auto& loop : oriented_loops(b.pairing, s)) {
    FieldMatrix prod;
    bool first = true;
    for (std::size_t t = 0; t < loop.slots.size(); ++t) {
      const int i = loop.slots[t];
      FieldMatrix x = mats[i].block(b.colour[i], b.colour[k + i]);
      if (loop.signs[t] == -1) x = bracket_transpose(x);
      if (first) {
        prod = std::move(x);
        first = false;
      } else {
        if (cols(prod) != rows(x)) throw std::invalid_argument("inadmissible colouring: block shapes do not chain");
        prod = multiply(prod, x);
      }
    }
    if (rows(prod) != cols(prod)) throw std::invalid_argument("inadmissible colouring: open block product");
    value *= field_trace(prod);
  }
  return value;
}

Complex m_stat(const ExtendedDiagram& x, const std::vector<BlockMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("no matrices");
  const auto df = dimension_function(mats.front().dims);
  Complex num = eval_cycle_trace(x.diagram, x.orientation, mats);
  double den = 1.0;
  for (const auto& [cls, count] : x.loops)
    for (int t = 0; t < count; ++t) num *= to_double(df.class_dim(cls));
  for (int cls = 0; cls < df.class_count(); ++cls) {
    const int f = fnc(x, cls, df);
    for (int t = 0; t < f; ++t) den *= to_double(df.class_dim(cls));
  }
  return num / den;
}

Complex m_stat(const ColouredDiagram& b, const std::vector<BlockMatrix>& mats) {
  return m_stat(ExtendedDiagram{b, {}, {}}, mats);
}

}  // namespace mfe
