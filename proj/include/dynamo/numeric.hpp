#pragma once
// Chebyshev collocation of the full boundary eigenvalue problem.
//
// Unknowns are the nodal values u = (f1(r_0..r_N), f2(r_0..r_N)).  Interior
// nodes carry the two differential equations, four rows carry the boundary
// conditions.  The constraint rows are eliminated (u_b = X u_i), leaving a
// standard eigenproblem of size 2(N - 1) for the interior values.

#include <dynamo/chebyshev.hpp>
#include <dynamo/error.hpp>
#include <dynamo/model.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace dynamo {

using cplx = std::complex<double>;

/// Rectangle in the complex plane; unbounded by default.
struct SpectralWindow {
  double re_min = -std::numeric_limits<double>::infinity();
  double re_max = std::numeric_limits<double>::infinity();
  double im_min = -std::numeric_limits<double>::infinity();
  double im_max = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// Discretized operator with the boundary rows substituted.
struct DiscreteOperator {
  int n = 0;
  Eigen::VectorXd nodes;
  Eigen::MatrixXd matrix;            // 2(N+1) square
  std::vector<bool> eigen_row;       // true: interior equation row, false: boundary row
  std::array<int, 4> boundary_rows;  // rows (and unknowns) of f1(0), f2(0), f1(1), f2(1)

  [[nodiscard]] int size() const { return static_cast<int>(matrix.rows()); }
  [[nodiscard]] int f1(int j) const { return j; }
  [[nodiscard]] int f2(int j) const { return n + 1 + j; }
};

inline constexpr int kMinResolution = 16;

/// Builds the collocation matrix.  Boundary rows sit on the boundary
/// unknowns' own rows; r = 0 is never evaluated for the 1/r^2 terms.
inline DiscreteOperator assemble(const ProblemParams& params, int n) {
  if (n < kMinResolution)
    throw ValidationError("assemble: resolution N must be at least " + std::to_string(kMinResolution));
  const auto grid = chebyshev_grid(n);
  const OdeSystem ode(params);
  const int m = 2 * (n + 1);

  DiscreteOperator op;
  op.n = n;
  op.nodes = grid.r;
  op.matrix = Eigen::MatrixXd::Zero(m, m);
  op.eigen_row.assign(m, true);

  for (int i = 1; i < n; ++i) {
    const auto c = ode.coefficients(grid.r(i));
    for (int row = 0; row < 2; ++row) {
      const int gi = row == 0 ? op.f1(i) : op.f2(i);
      for (int col = 0; col < 2; ++col) {
        const int offset = col == 0 ? 0 : n + 1;
        op.matrix.row(gi).segment(offset, n + 1) +=
            c.l0[row][col] * grid.d2.row(i) + c.l1[row][col] * grid.d1.row(i);
        op.matrix(gi, offset + i) += c.l2[row][col];
      }
    }
  }

  op.boundary_rows = {op.f1(0), op.f2(0), op.f1(n), op.f2(n)};
  for (int row : op.boundary_rows) {
    op.matrix.row(row).setZero();
    op.eigen_row[row] = false;
  }
  op.matrix(op.f1(0), op.f1(0)) = 1.0;
  op.matrix(op.f2(0), op.f2(0)) = 1.0;
  op.matrix(op.f2(n), op.f2(n)) = 1.0;
  op.matrix.row(op.f1(n)).segment(0, n + 1) = params.beta() * grid.d1.row(n);
  op.matrix(op.f1(n), op.f1(n)) += ode.robin_coefficient();
  return op;
}

/// Interior-only eigenproblem obtained by eliminating the boundary unknowns.
struct ReducedProblem {
  Eigen::MatrixXd matrix;    // 2(N-1) square
  Eigen::MatrixXd lift;      // 2(N+1) x 2(N-1): full nodal vector from interior values
  double constraint_cond = 0.0;
};

inline ReducedProblem reduce(const DiscreteOperator& op) {
  std::vector<int> interior, boundary(op.boundary_rows.begin(), op.boundary_rows.end());
  for (int i = 0; i < op.size(); ++i)
    if (op.eigen_row[i]) interior.push_back(i);
  const int ni = static_cast<int>(interior.size());

  Eigen::Matrix4d cb;
  Eigen::MatrixXd ci(4, ni);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) cb(a, b) = op.matrix(boundary[a], boundary[b]);
    for (int b = 0; b < ni; ++b) ci(a, b) = op.matrix(boundary[a], interior[b]);
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(cb);
  if (!lu.isInvertible()) throw NumericalError("boundary rows do not determine the boundary values");
  const Eigen::MatrixXd x = -lu.solve(ci);  // u_b = x u_i

  ReducedProblem red;
  red.constraint_cond = cb.norm() * cb.inverse().norm();
  red.matrix.resize(ni, ni);
  Eigen::MatrixXd aib(ni, 4);
  for (int a = 0; a < ni; ++a) {
    for (int b = 0; b < ni; ++b) red.matrix(a, b) = op.matrix(interior[a], interior[b]);
    for (int b = 0; b < 4; ++b) aib(a, b) = op.matrix(interior[a], boundary[b]);
  }
  red.matrix.noalias() += aib * x;

  red.lift = Eigen::MatrixXd::Zero(op.size(), ni);
  for (int a = 0; a < ni; ++a) red.lift(interior[a], a) = 1.0;
  for (int b = 0; b < 4; ++b) red.lift.row(boundary[b]) = x.row(b);
  return red;
}

struct RawSpectrum {
  std::vector<cplx> eigenvalues;
  std::vector<Eigen::VectorXcd> eigenvectors;  // full nodal vectors, unit 2-norm
};

inline RawSpectrum solve_reduced(const ReducedProblem& red, bool want_vectors) {
  if (!red.matrix.allFinite()) throw NumericalError("discretized operator has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> es(red.matrix, want_vectors);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver did not converge (size " << red.matrix.rows() << ", |A|_F = " << red.matrix.norm()
        << ", boundary block condition ~ " << red.constraint_cond << ")";
    throw NumericalError(msg.str());
  }
  RawSpectrum out;
  const auto& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (want_vectors) {
    const Eigen::MatrixXcd vecs = es.eigenvectors();
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
      Eigen::VectorXcd full = red.lift.cast<cplx>() * vecs.col(c);
      full /= full.norm();
      out.eigenvectors.push_back(std::move(full));
    }
  }
  return out;
}

/// All eigenvalues of the discretized problem (projection route).
inline std::vector<cplx> raw_eigenvalues(const ProblemParams& params, int n) {
  return solve_reduced(reduce(assemble(params, n)), false).eigenvalues;
}

/// Cross-check route: boundary rows are kept and given the eigenvalue
/// `shift`, so the full problem A u = lambda B u has four spurious
/// eigenvalues at `shift` which are discarded.
inline std::vector<cplx> shifted_eigenvalues(const ProblemParams& params, int n, double shift = 1.0e5) {
  const auto op = assemble(params, n);
  Eigen::MatrixXd a = op.matrix;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(op.size(), op.size());
  for (int i = 0; i < op.size(); ++i)
    if (op.eigen_row[i]) b(i, i) = 1.0;
  for (int row : op.boundary_rows) {
    b.row(row) = op.matrix.row(row);
    a.row(row) = shift * op.matrix.row(row);
  }
  const Eigen::MatrixXd m = b.fullPivLu().solve(a);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("shifted eigensolver did not converge");
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx z = es.eigenvalues()(i);
    if (std::abs(z - shift) > 1e-6 * shift) out.push_back(z);
  }
  return out;
}

struct SpectrumOptions {
  double trust_tolerance = 1e-7;  // relative N vs 2N agreement
  bool eigenvectors = false;
};

struct SpectrumResult {
  ProblemParams params;
  int n = 0;
  std::vector<cplx> eigenvalues;
  std::vector<bool> trusted;
  std::vector<Eigen::VectorXcd> eigenvectors;  // nodal (f1, f2), empty unless requested

  [[nodiscard]] std::vector<cplx> trusted_eigenvalues() const {
    std::vector<cplx> out;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
      if (trusted[i]) out.push_back(eigenvalues[i]);
    return out;
  }
};

inline bool agrees(cplx z, const std::vector<cplx>& reference, double tol) {
  const double scale = tol * std::max(1.0, std::abs(z));
  return std::any_of(reference.begin(), reference.end(), [&](cplx w) { return std::abs(w - z) <= scale; });
}

namespace detail {
// Ascending real part, then ascending imaginary part.
inline bool spectral_order(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}
}  // namespace detail

/// Eigenvalues inside `window`, each flagged trusted when the 2N
/// discretization reproduces it to the trust tolerance.
inline SpectrumResult spectrum(const ProblemParams& params, int n, const SpectralWindow& window = {},
                               const SpectrumOptions& options = {}) {
  const auto coarse = solve_reduced(reduce(assemble(params, n)), options.eigenvectors);
  const auto fine = raw_eigenvalues(params, 2 * n);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < coarse.eigenvalues.size(); ++i)
    if (window.contains(coarse.eigenvalues[i])) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::spectral_order(coarse.eigenvalues[a], coarse.eigenvalues[b]);
  });

  SpectrumResult res{params, n, {}, {}, {}};
  for (std::size_t i : order) {
    res.eigenvalues.push_back(coarse.eigenvalues[i]);
    res.trusted.push_back(agrees(coarse.eigenvalues[i], fine, options.trust_tolerance));
    if (options.eigenvectors) res.eigenvectors.push_back(coarse.eigenvectors[i]);
  }
  return res;
}

/// True iff every trusted eigenvalue is real to 1e-7 max(1, |Re lambda|).
inline bool reality_check(const SpectrumResult& result) {
  for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
    if (!result.trusted[i]) continue;
    const cplx z = result.eigenvalues[i];
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z.real()))) return false;
  }
  return true;
}

}  // namespace dynamo
