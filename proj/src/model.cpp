#include "fastrd/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fastrd {

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> out;
  auto positive = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) out.push_back(std::string(name) + " must be > 0");
  };
  positive(epsilon, "epsilon");
  positive(lambda, "lambda");
  positive(d1, "d1");
  positive(d2, "d2");
  return out;
}

void ModelParams::validate() const {
  auto v = violations();
  if (!v.empty()) throw std::invalid_argument(v.front());
}

Grid::Grid(int dim, double a, double b, int cells)
    : dim_(dim), a_(a), b_(b), cells_(cells), h_((b - a) / cells) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
  if (!(b > a)) throw std::invalid_argument("grid domain requires b > a");
  if (cells < 2) throw std::invalid_argument("grid needs at least 2 cells");
}

Eigen::Index Grid::size() const {
  const Eigen::Index n = nodes_per_axis();
  return dim_ == 1 ? n : n * n;
}

bool StateField::valid_for(Eigen::Index n) const {
  return u.size() == n && v.size() == n && p.size() == n && u.allFinite() && v.allFinite() &&
         p.allFinite();
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

StateField allocate(const Grid& grid) {
  const auto n = grid.size();
  return {Field::Zero(n), Field::Zero(n), Field::Zero(n), 0.0};
}

void require_dim(const InitialPreset& preset, const Grid& grid) {
  if (preset_dimension(preset) != grid.dim()) {
    throw std::invalid_argument("preset " + preset_name(preset) + " needs a " +
                                std::to_string(preset_dimension(preset)) + "D grid");
  }
}

// Overwrite Dirichlet nodes with the boundary data at t = 0.
void pin_boundary(StateField& s, const Grid& grid, const BoundarySpec& bc) {
  const int n = grid.nodes_per_axis();
  if (grid.dim() == 1) {
    const auto pin = [&](int i, Face f) {
      if (bc.u[f].is_dirichlet()) s.u(i) = bc.u[f].data.at(0.0, 0.0);
      if (bc.v[f].is_dirichlet()) s.v(i) = bc.v[f].data.at(0.0, 0.0);
    };
    pin(0, Face::XLow);
    pin(n - 1, Face::XHigh);
    return;
  }
  // y faces first so x faces win at shared corners, matching the solver.
  for (int k = 0; k < n; ++k) {
    const double s1 = grid.coord(k);
    const auto pin = [&](Eigen::Index idx, Face f) {
      if (bc.u[f].is_dirichlet()) s.u(idx) = bc.u[f].data.at(0.0, s1);
      if (bc.v[f].is_dirichlet()) s.v(idx) = bc.v[f].data.at(0.0, s1);
    };
    pin(grid.index(k, 0), Face::YLow);
    pin(grid.index(k, n - 1), Face::YHigh);
  }
  for (int k = 0; k < n; ++k) {
    const double s2 = grid.coord(k);
    const auto pin = [&](Eigen::Index idx, Face f) {
      if (bc.u[f].is_dirichlet()) s.u(idx) = bc.u[f].data.at(0.0, s2);
      if (bc.v[f].is_dirichlet()) s.v(idx) = bc.v[f].data.at(0.0, s2);
    };
    pin(grid.index(0, k), Face::XLow);
    pin(grid.index(n - 1, k), Face::XHigh);
  }
}

}  // namespace

std::string preset_name(const InitialPreset& preset) {
  return std::visit(overloaded{[](const Case1Cosine&) { return std::string("case1_cosine"); },
                               [](const Case2Jump&) { return std::string("case2_jump"); },
                               [](const LimitTest&) { return std::string("limit_test"); },
                               [](const TwoD&) { return std::string("two_d"); }},
                    preset);
}

int preset_dimension(const InitialPreset& preset) {
  return std::holds_alternative<TwoD>(preset) ? 2 : 1;
}

BoundarySpec preset_boundary(const InitialPreset& preset, const ModelParams& params) {
  return std::visit(
      overloaded{
          [](const Case1Cosine& c) {
            return BoundarySpec{FieldBoundary::uniform(FaceCondition::dirichlet(1.0)),
                                FieldBoundary::uniform(FaceCondition::dirichlet(c.eps0))};
          },
          [](const Case2Jump&) {
            return BoundarySpec{FieldBoundary::uniform(FaceCondition::neumann()),
                                FieldBoundary::uniform(FaceCondition::neumann())};
          },
          [&](const LimitTest& c) {
            BoundarySpec bc;
            bc.u = FieldBoundary::uniform(FaceCondition::neumann());
            bc.v = FieldBoundary::uniform(FaceCondition::neumann());
            bc.u[Face::XLow] = FaceCondition::dirichlet(0.0);
            bc.u[Face::XHigh] = FaceCondition::dirichlet(c.theta / params.d1);
            bc.v[Face::XLow] = FaceCondition::dirichlet(c.stefan / params.d2);
            bc.v[Face::XHigh] = FaceCondition::dirichlet(0.0);
            return bc;
          },
          [](const TwoD& c) {
            BoundarySpec bc;
            bc.u = FieldBoundary::uniform(FaceCondition::neumann());
            bc.v = FieldBoundary::uniform(FaceCondition::neumann());
            const double half_sum = 0.5 * (c.melt + c.stefan);
            const double half_diff = 0.5 * (c.melt - c.stefan);
            bc.u[Face::XLow] = FaceCondition::dirichlet(0.0);
            bc.u[Face::XHigh] = FaceCondition::dirichlet(half_sum, half_diff);
            bc.v[Face::XLow] = FaceCondition::dirichlet(half_sum, -half_diff);
            bc.v[Face::XHigh] = FaceCondition::dirichlet(0.0);
            return bc;
          }},
      preset);
}

StateField make_initial_state(const InitialPreset& preset, const Grid& grid, const ModelParams& params) {
  require_dim(preset, grid);
  StateField s = allocate(grid);
  const int n = grid.nodes_per_axis();

  std::visit(overloaded{
                 [&](const Case1Cosine& c) {
                   for (int i = 0; i < n; ++i) {
                     const double x = grid.coord(i);
                     s.v(i) = std::cos(std::numbers::pi * x / (2.0 * c.L)) + c.eps0;
                     s.u(i) = 1.0 - s.v(i) + c.eps0;
                     s.p(i) = x / (2.0 * c.L) + 0.5;
                   }
                 },
                 [&](const Case2Jump& c) {
                   const double u_liquid = c.theta / params.d1;
                   const double v_solid = c.stefan / params.d2;
                   for (int i = 0; i < n; ++i) {
                     const double x = grid.coord(i);
                     if (x < 0.0) {
                       s.u(i) = 0.0, s.v(i) = v_solid, s.p(i) = 0.0;
                     } else if (x > 0.0) {
                       s.u(i) = u_liquid, s.v(i) = 0.0, s.p(i) = 1.0;
                     } else {
                       s.u(i) = 0.5 * u_liquid, s.v(i) = 0.5 * v_solid, s.p(i) = 0.5;
                     }
                   }
                 },
                 [&](const LimitTest& c) {
                   s.u.setConstant(c.theta / params.d1);
                   s.v.setZero();
                   s.p.setOnes();
                   s.p(0) = 0.0;
                 },
                 [&](const TwoD& c) {
                   const double u_liquid = c.theta / params.d1;
                   const double v_solid = c.theta / params.d2;
                   for (int j = 0; j < n; ++j) {
                     for (int i = 0; i < n; ++i) {
                       const auto idx = grid.index(i, j);
                       const bool solid = grid.coord(i) <= 0.0;
                       s.u(idx) = solid ? 0.0 : u_liquid;
                       s.v(idx) = solid ? v_solid : 0.0;
                       s.p(idx) = solid ? 0.0 : 1.0;
                     }
                   }
                 }},
             preset);

  pin_boundary(s, grid, preset_boundary(preset, params));
  return s;
}

Field enthalpy(const StateField& state, const ModelParams& params) {
  return state.u - state.v + params.lambda * state.p;
}

double temperature(double w, const ModelParams& params) {
  if (w < 0.0) return params.d2 * w;
  if (w > params.lambda) return params.d1 * (w - params.lambda);
  return 0.0;
}

Field temperature(const Field& w, const ModelParams& params) {
  return w.unaryExpr([&](double x) { return temperature(x, params); });
}

}  // namespace fastrd
