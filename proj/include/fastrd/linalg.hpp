#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace fastrd {

class LinearSolverError : public std::runtime_error {
public:
  LinearSolverError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Row i reads sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i].
/// sub[0] and super[n-1] are ignored.
template <typename Scalar>
struct TridiagonalSystem {
  ArrayX<Scalar> sub;
  ArrayX<Scalar> diag;
  ArrayX<Scalar> super;
  ArrayX<Scalar> rhs;

  Eigen::Index size() const { return diag.size(); }

  void resize(Eigen::Index n) {
    sub.resize(n);
    diag.resize(n);
    super.resize(n);
    rhs.resize(n);
  }
};

/// Thomas elimination without pivoting. `scratch` holds the modified
/// super-diagonal and may be reused between calls.
template <typename Scalar>
void solve_tridiagonal(const TridiagonalSystem<Scalar>& sys, ArrayX<Scalar>& x, ArrayX<Scalar>& scratch) {
  const Eigen::Index n = sys.size();
  if (sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n) {
    throw std::invalid_argument("tridiagonal arrays must share one length");
  }
  x.resize(n);
  scratch.resize(n);
  if (n == 0) return;

  Scalar pivot = sys.diag(0);
  if (pivot == Scalar(0)) throw LinearSolverError("zero pivot in tridiagonal row 0");
  scratch(0) = n > 1 ? sys.super(0) / pivot : Scalar(0);
  x(0) = sys.rhs(0) / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = sys.diag(i) - sys.sub(i) * scratch(i - 1);
    if (pivot == Scalar(0)) {
      throw LinearSolverError("zero pivot in tridiagonal row " + std::to_string(i));
    }
    scratch(i) = i + 1 < n ? sys.super(i) / pivot : Scalar(0);
    x(i) = (sys.rhs(i) - sys.sub(i) * x(i - 1)) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= scratch(i) * x(i + 1);
}

template <typename Scalar>
ArrayX<Scalar> solve_tridiagonal(const TridiagonalSystem<Scalar>& sys) {
  ArrayX<Scalar> x;
  ArrayX<Scalar> scratch;
  solve_tridiagonal(sys, x, scratch);
  return x;
}

/// Five-point system on an nx-by-ny rectangle of unknowns (x-fastest):
///
///   diag_k x_k - coupling * sum_{neighbours} x_nb = rhs_k + boundary_k
///
/// Neighbours outside the rectangle are either eliminated Dirichlet nodes
/// (their contribution already sits in `boundary`) or, on a side flagged in
/// `mirrored`, ghost reflections of the first interior neighbour, which
/// doubles the coupling towards it. Sides are ordered x-low, x-high, y-low,
/// y-high.
template <typename Scalar>
struct FivePointSystem {
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  ArrayX<Scalar> diag;
  Scalar coupling = Scalar(0);
  ArrayX<Scalar> rhs;
  ArrayX<Scalar> boundary;
  std::array<bool, 4> mirrored{false, false, false, false};

  Eigen::Index size() const { return nx * ny; }
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

namespace detail {

// Row weight that makes mirrored rows symmetric: 1/2 per mirrored side the
// unknown lies on.
template <typename Scalar>
Scalar row_weight(const FivePointSystem<Scalar>& s, Eigen::Index i, Eigen::Index j) {
  Scalar w(1);
  if ((i == 0 && s.mirrored[0]) || (i == s.nx - 1 && s.mirrored[1])) w *= Scalar(0.5);
  if ((j == 0 && s.mirrored[2]) || (j == s.ny - 1 && s.mirrored[3])) w *= Scalar(0.5);
  return w;
}

// Off-diagonal sum for the unweighted operator at (i, j).
template <typename Scalar>
Scalar neighbour_sum(const FivePointSystem<Scalar>& s, const ArrayX<Scalar>& x, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index k = i + s.nx * j;
  Scalar acc(0);
  if (i > 0) acc += x(k - 1);
  else if (s.mirrored[0] && s.nx > 1) acc += x(k + 1);
  if (i < s.nx - 1) acc += x(k + 1);
  else if (s.mirrored[1] && s.nx > 1) acc += x(k - 1);
  if (j > 0) acc += x(k - s.nx);
  else if (s.mirrored[2] && s.ny > 1) acc += x(k + s.nx);
  if (j < s.ny - 1) acc += x(k + s.nx);
  else if (s.mirrored[3] && s.ny > 1) acc += x(k - s.nx);
  return acc;
}

}  // namespace detail

/// y = A x for the unweighted five-point operator.
template <typename Scalar>
ArrayX<Scalar> apply(const FivePointSystem<Scalar>& s, const ArrayX<Scalar>& x) {
  ArrayX<Scalar> y(s.size());
  for (Eigen::Index j = 0; j < s.ny; ++j) {
    for (Eigen::Index i = 0; i < s.nx; ++i) {
      const Eigen::Index k = i + s.nx * j;
      y(k) = s.diag(k) * x(k) - s.coupling * detail::neighbour_sum(s, x, i, j);
    }
  }
  return y;
}

/// Jacobi-preconditioned conjugate gradient on the row-weighted symmetric
/// form of the system. Stops when ||W(b - A x)||_2 <= tol ||W b||_2.
/// `observer`, when set, sees every iterate (iteration 0 is the initial guess).
template <typename Scalar>
ArrayX<Scalar> solve_fivepoint(const FivePointSystem<Scalar>& s, Scalar tol, int max_iter,
                               const ArrayX<Scalar>* initial_guess = nullptr, CgReport* report = nullptr,
                               const std::function<void(int, const ArrayX<Scalar>&)>& observer = {}) {
  const Eigen::Index n = s.size();
  if (s.diag.size() != n || s.rhs.size() != n || s.boundary.size() != n) {
    throw std::invalid_argument("five-point arrays must match nx * ny");
  }
  if (!(tol > Scalar(0))) throw std::invalid_argument("CG tolerance must be > 0");
  if (max_iter <= 0) max_iter = static_cast<int>(10 * n);

  ArrayX<Scalar> weight(n);
  for (Eigen::Index j = 0; j < s.ny; ++j)
    for (Eigen::Index i = 0; i < s.nx; ++i) weight(i + s.nx * j) = detail::row_weight(s, i, j);

  const ArrayX<Scalar> b = weight * (s.rhs + s.boundary);
  const ArrayX<Scalar> inv_diag = (weight * s.diag).inverse();
  const Scalar b_norm = std::sqrt((b * b).sum());

  ArrayX<Scalar> x = (initial_guess && initial_guess->size() == n) ? *initial_guess : ArrayX<Scalar>::Zero(n);
  if (b_norm == Scalar(0)) {
    x.setZero();
    if (report) *report = {0, 0.0};
    if (observer) observer(0, x);
    return x;
  }
  if (observer) observer(0, x);

  ArrayX<Scalar> r = b - weight * apply(s, x);
  Scalar r_norm = std::sqrt((r * r).sum());
  ArrayX<Scalar> z = inv_diag * r;
  ArrayX<Scalar> d = z;
  Scalar rz = (r * z).sum();

  int it = 0;
  while (r_norm > tol * b_norm && it < max_iter) {
    const ArrayX<Scalar> q = weight * apply(s, d);
    const Scalar alpha = rz / (d * q).sum();
    x += alpha * d;
    r -= alpha * q;
    ++it;
    if (observer) observer(it, x);
    r_norm = std::sqrt((r * r).sum());
    z = inv_diag * r;
    const Scalar rz_next = (r * z).sum();
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }

  const double rel = static_cast<double>(r_norm / b_norm);
  if (report) *report = {it, rel};
  if (r_norm > tol * b_norm) {
    throw LinearSolverError("CG did not converge in " + std::to_string(max_iter) +
                                " iterations (relative residual " + std::to_string(rel) + ")",
                            rel);
  }
  return x;
}

}  // namespace fastrd
