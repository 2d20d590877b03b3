#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace fastrd {

/// Nodal values over every grid node, boundary nodes included. In 2D the
/// layout is x1-fastest: index = i + (N+1) * j.
using Field = Eigen::ArrayXd;

/// Coefficients of the fast reaction-diffusion system
///
///   u_t - d1 Lap u = -(1/eps) u [v + lambda (1 - p)]
///   v_t - d2 Lap v = -(1/eps) v (u + lambda p)
///   p_t            =  (1/eps) [(1 - p) u - v p]
struct ModelParams {
  double epsilon = 1.0;
  double lambda = 1.0;
  double d1 = 1.0;
  double d2 = 1.0;

  /// Human-readable violations, empty when valid.
  std::vector<std::string> violations() const;
  /// Throws std::invalid_argument on the first violation.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Uniform node-centred mesh on [a, b]^dim with N cells per axis.
class Grid {
public:
  Grid(int dim, double a, double b, int cells);

  int dim() const { return dim_; }
  double a() const { return a_; }
  double b() const { return b_; }
  int cells() const { return cells_; }
  double h() const { return h_; }
  int nodes_per_axis() const { return cells_ + 1; }
  Eigen::Index size() const;

  double coord(int i) const { return a_ + i * h_; }
  Eigen::Index index(int i, int j = 0) const {
    return static_cast<Eigen::Index>(i) + static_cast<Eigen::Index>(nodes_per_axis()) * j;
  }

  bool operator==(const Grid&) const = default;

private:
  int dim_;
  double a_;
  double b_;
  int cells_;
  double h_;
};

enum class Face { XLow = 0, XHigh = 1, YLow = 2, YHigh = 3 };

/// Dirichlet data affine in the tangential coordinate s and in time:
/// g(t, s) = value + slope * s + rate * t. In 1D s is always 0.
struct DirichletValue {
  double value = 0.0;
  double slope = 0.0;
  double rate = 0.0;

  double at(double t, double s) const { return value + slope * s + rate * t; }
  bool operator==(const DirichletValue&) const = default;
};

struct FaceCondition {
  enum class Kind { Dirichlet, Neumann };

  Kind kind = Kind::Neumann;
  DirichletValue data{};

  static FaceCondition dirichlet(double value, double slope = 0.0, double rate = 0.0) {
    return {Kind::Dirichlet, {value, slope, rate}};
  }
  static FaceCondition neumann() { return {Kind::Neumann, {}}; }

  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
  bool operator==(const FaceCondition&) const = default;
};

/// Conditions for one diffusing field. Faces are indexed by Face; a 1D
/// grid only consults XLow and XHigh.
struct FieldBoundary {
  std::array<FaceCondition, 4> faces{};

  const FaceCondition& operator[](Face f) const { return faces[static_cast<int>(f)]; }
  FaceCondition& operator[](Face f) { return faces[static_cast<int>(f)]; }

  static FieldBoundary uniform(const FaceCondition& c) { return {{c, c, c, c}}; }

  bool operator==(const FieldBoundary&) const = default;
};

/// p has no boundary condition: its equation carries no spatial operator.
struct BoundarySpec {
  FieldBoundary u;
  FieldBoundary v;

  bool operator==(const BoundarySpec&) const = default;
};

struct StateField {
  Field u;
  Field v;
  Field p;
  double t = 0.0;

  /// True when all three arrays have `n` entries and are finite.
  bool valid_for(Eigen::Index n) const;
};

// ---------------------------------------------------------------------------
// Initial-data presets. Each preset also implies its boundary data.

/// Smooth data on [-L, L]: v = cos(pi x / 2L) + eps0, u = 1 - v + eps0,
/// p = x/2L + 1/2; Dirichlet u = 1, v = eps0.
struct Case1Cosine {
  double L = 1.0;
  double eps0 = 1e-8;
  bool operator==(const Case1Cosine&) const = default;
};

/// Jump at x = 0 with homogeneous Neumann walls: solid (v = S_t/d2, p = 0)
/// for x < 0, liquid (u = theta/d1, p = 1) for x > 0.
struct Case2Jump {
  double L = 1.0;
  double theta = 0.05;
  double stefan = 0.25;
  bool operator==(const Case2Jump&) const = default;
};

/// Liquid everywhere (u = theta/d1, v = 0, p = 1) with a freezing stimulus
/// at x = -L: Dirichlet u = 0, v = S_t/d2 on the left; u = theta/d1, v = 0
/// on the right.
struct LimitTest {
  double L = 1.0;
  double theta = 0.05;
  double stefan = 0.25;
  bool operator==(const LimitTest&) const = default;
};

/// Two-dimensional solid/liquid split along x1 = 0, Dirichlet data on the
/// x1 = +-L faces affine in x2, homogeneous Neumann on the x2 faces.
struct TwoD {
  double L = 1.0;
  double theta = 0.05;
  double stefan = 0.25;
  double melt = 0.05;
  bool operator==(const TwoD&) const = default;
};

using InitialPreset = std::variant<Case1Cosine, Case2Jump, LimitTest, TwoD>;

std::string preset_name(const InitialPreset& preset);
int preset_dimension(const InitialPreset& preset);

/// Nodal sampling of the preset's formulas. Boundary nodes carrying
/// Dirichlet data take the data's t = 0 value.
StateField make_initial_state(const InitialPreset& preset, const Grid& grid, const ModelParams& params);

/// Boundary data the preset is defined with.
BoundarySpec preset_boundary(const InitialPreset& preset, const ModelParams& params);

/// w = u - v + lambda p.
Field enthalpy(const StateField& state, const ModelParams& params);

/// Temperature B(w): d2 w for w < 0, 0 on [0, lambda], d1 (w - lambda) above.
Field temperature(const Field& w, const ModelParams& params);
double temperature(double w, const ModelParams& params);

}  // namespace fastrd
