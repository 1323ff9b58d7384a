#include "deltatrap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace deltatrap::oracle {
namespace {

constexpr double kCutoffWidths = 12.0;

cplx inverse(cplx z) { return std::conj(z) / std::norm(z); }

void require_same_grid(const WavefunctionField& a, const WavefunctionField& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw std::invalid_argument("fields live on different grids");
  }
}

// Applies the discrete Hamiltonian -D2 + V with zero Dirichlet boundaries.
std::vector<cplx> apply_hamiltonian(const WavefunctionField& f, const std::vector<double>& V) {
  const std::size_t n = f.values.size();
  const double inv_dx2 = 1.0 / (f.grid.dx() * f.grid.dx());
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx left = j > 0 ? f.values[j - 1] : cplx{};
    const cplx right = j + 1 < n ? f.values[j + 1] : cplx{};
    out[j] = (2.0 * f.values[j] - left - right) * inv_dx2 + V[j] * f.values[j];
  }
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (n_points < 3) throw std::invalid_argument("GridSpec: need at least 3 points");
  if (!(x_max > x_min)) throw std::invalid_argument("GridSpec: x_max must exceed x_min");
  if (!(dt > 0.0)) throw std::invalid_argument("GridSpec: dt must be positive");
  if (dt > dx() * (1.0 + 1e-12)) throw std::invalid_argument("GridSpec: dt must not exceed dx");
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.n_points == b.n_points;
}

DeltaModel::DeltaModel(double width, double gamma) : width_(width), gamma_(gamma) {
  if (!(width > 0.0)) throw std::invalid_argument("DeltaModel: width must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("DeltaModel: gamma must be non-negative and finite");
  }
}

double DeltaModel::potential(double x, double centre) const {
  const double u = (x - centre) / width_;
  if (std::abs(u) > kCutoffWidths) return 0.0;
  return -gamma_ * std::exp(-0.5 * u * u) / (width_ * std::sqrt(2.0 * std::numbers::pi));
}

std::vector<double> DeltaModel::sample(const GridSpec& grid, double centre) const {
  std::vector<double> V(grid.n_points, 0.0);
  const double dx = grid.dx();
  const double reach = kCutoffWidths * width_;
  const auto lo = static_cast<std::ptrdiff_t>(std::floor((centre - reach - grid.x_min) / dx));
  const auto hi = static_cast<std::ptrdiff_t>(std::ceil((centre + reach - grid.x_min) / dx));
  const auto last = static_cast<std::ptrdiff_t>(grid.n_points) - 1;
  for (auto j = std::max<std::ptrdiff_t>(lo, 0); j <= std::min(hi, last); ++j) {
    V[static_cast<std::size_t>(j)] = potential(grid.x(static_cast<std::size_t>(j)), centre);
  }
  return V;
}

double DeltaModel::integrated_strength(const GridSpec& grid, double centre) const {
  const auto V = sample(grid, centre);
  double sum = 0.0;
  for (double value : V) sum += value;
  return sum * grid.dx();
}

void DeltaModel::validate_on(const GridSpec& grid) const {
  if (gamma_ > 0.0 && width_ > 0.1 / gamma_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("DeltaModel: width exceeds 0.1 / gamma");
  }
  if (width_ < 2.0 * grid.dx() * (1.0 - 1e-12)) {
    throw std::invalid_argument("DeltaModel: width is not resolved (needs width >= 2 dx)");
  }
}

DeltaModel default_model(const WellParams& p) { return {0.01 / p.gamma(), p.gamma()}; }

cplx overlap(const WavefunctionField& a, const WavefunctionField& b) {
  require_same_grid(a, b);
  const std::size_t n = a.values.size();
  cplx sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += std::conj(a.values[j]) * b.values[j];
  sum -= 0.5 * (std::conj(a.values.front()) * b.values.front() +
                std::conj(a.values.back()) * b.values.back());
  return sum * a.grid.dx();
}

double norm(const WavefunctionField& a) { return std::sqrt(overlap(a, a).real()); }

void check_field(const WavefunctionField& f) {
  if (f.values.size() != f.grid.n_points) {
    throw std::invalid_argument("WavefunctionField: sample count does not match grid");
  }
  for (const cplx& z : f.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("WavefunctionField: non-finite sample");
    }
  }
  const double n = norm(f);
  if (n * n > 1.0 + 1e-6) throw std::invalid_argument("WavefunctionField: norm exceeds 1");
}

WavefunctionField sample_field(const GridSpec& grid, double t,
                               const std::function<cplx(double)>& psi) {
  WavefunctionField f{grid, t, std::vector<cplx>(grid.n_points)};
  for (std::size_t j = 0; j < grid.n_points; ++j) f.values[j] = psi(grid.x(j));
  return f;
}

GridSpec auto_grid(const WellParams& p, const DeltaModel& model, double t_final) {
  const double g = p.gamma();
  const double speed = std::abs(p.v());
  const double margin = 40.0 / g;
  const double x_min = -margin - 2.0 * speed * t_final;
  const double x_max = 2.0 * speed * t_final + margin + 10.0 * std::sqrt(t_final);

  double dx = std::min(0.5 * model.width(), 0.05 / g);
  if (speed > 0.0) dx = std::min(dx, std::numbers::pi / (8.0 * speed));
  const auto intervals = static_cast<std::size_t>(std::ceil((x_max - x_min) / dx));
  GridSpec grid{x_min, x_max, intervals + 1, 0.0};
  grid.dt = grid.dx();
  return grid;
}

GroundState ground_state_on_grid(const GridSpec& grid, const DeltaModel& model,
                                 GroundStateMethod method) {
  if (!(model.gamma() > 0.0)) throw std::invalid_argument("ground_state_on_grid: needs gamma > 0");
  grid.validate();
  model.validate_on(grid);
  const WellParams p(model.gamma(), 0.0);

  GroundState out;
  out.field = sample_field(grid, 0.0, [&](double x) { return analytic::initial_bound_state(x, p); });
  auto normalize = [](WavefunctionField& f) {
    const double n = norm(f);
    for (cplx& z : f.values) z /= n;
  };
  normalize(out.field);
  const auto V = model.sample(grid, 0.0);

  auto residual_of = [&](const WavefunctionField& f, double energy) {
    const auto h = apply_hamiltonian(f, V);
    double r = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) r += std::norm(h[j] - energy * f.values[j]);
    return std::sqrt(r * grid.dx());
  };

  out.energy = energy_expectation(out.field, model, 0.0);
  if (method == GroundStateMethod::sampled) {
    out.residual = residual_of(out.field, out.energy);
    return out;
  }

  // Backward-Euler imaginary time, (1 + tau H) psi_new = psi_old, damps every
  // excited component by at least a factor 2 per step relative to the ground state.
  const std::size_t n = grid.n_points;
  const double tau = 2.0 / (model.gamma() * model.gamma());
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  const double off = -tau * inv_dx2;
  std::vector<double> sweep(n);
  std::vector<cplx> rhs(n);

  double previous = out.energy;
  for (int iter = 1; iter <= 5000; ++iter) {
    double m = 1.0 + tau * (2.0 * inv_dx2 + V[0]);
    sweep[0] = off / m;
    rhs[0] = out.field.values[0] / m;
    for (std::size_t j = 1; j < n; ++j) {
      m = 1.0 + tau * (2.0 * inv_dx2 + V[j]) - off * sweep[j - 1];
      sweep[j] = off / m;
      rhs[j] = (out.field.values[j] - off * rhs[j - 1]) / m;
    }
    out.field.values[n - 1] = rhs[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
      out.field.values[j] = rhs[j] - sweep[j] * out.field.values[j + 1];
    }
    normalize(out.field);
    out.energy = energy_expectation(out.field, model, 0.0);
    out.iterations = iter;
    if (std::abs(out.energy - previous) <= 1e-15 * std::abs(out.energy)) {
      out.residual = residual_of(out.field, out.energy);
      if (out.residual < 1e-6 * std::abs(out.energy) + 1e-10) return out;
    }
    previous = out.energy;
  }
  out.residual = residual_of(out.field, out.energy);
  std::ostringstream msg;
  msg << "imaginary-time relaxation did not converge (residual " << out.residual << ")";
  throw ConvergenceError(msg.str(), out.residual);
}

double energy_expectation(const WavefunctionField& f, const DeltaModel& model, double centre) {
  const auto V = model.sample(f.grid, centre);
  const auto h = apply_hamiltonian(f, V);
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    num += std::conj(f.values[j]) * h[j];
    den += std::norm(f.values[j]);
  }
  return num.real() / den;
}

CrankNicolson::CrankNicolson(GridSpec grid, DeltaModel model, WellParams params)
    : grid_(grid), model_(model), params_(params) {
  grid_.validate();
  model_.validate_on(grid_);
  rhs_.resize(grid_.n_points);
  sweep_.resize(grid_.n_points);
}

void CrankNicolson::step(WavefunctionField& field) {
  if (!(field.grid == grid_) || field.values.size() != grid_.n_points) {
    throw std::invalid_argument("CrankNicolson: field grid does not match stepper grid");
  }
  const double dt = grid_.dt;
  const double centre = params_.v() * (field.t + 0.5 * dt);
  const double guard = 5.0 * model_.width();
  if (centre < grid_.x_min + guard || centre > grid_.x_max - guard) {
    throw std::invalid_argument("CrankNicolson: well centre left the safe region of the grid");
  }
  potential_ = model_.sample(grid_, centre);

  const std::size_t n = grid_.n_points;
  const double dx = grid_.dx();
  const double half = 0.5 * dt;
  const double kinetic = 2.0 / (dx * dx);
  const cplx off(0.0, -half / (dx * dx));  // off-diagonal of 1 + i dt/2 H
  auto& psi = field.values;

  for (std::size_t j = 0; j < n; ++j) {
    const cplx left = j > 0 ? psi[j - 1] : cplx{};
    const cplx right = j + 1 < n ? psi[j + 1] : cplx{};
    const double diag = kinetic + potential_[j];
    rhs_[j] = cplx(1.0, -half * diag) * psi[j] - off * (left + right);
  }

  // Thomas sweep for (1 + i dt/2 H) psi_new = rhs.
  cplx m = cplx(1.0, half * (kinetic + potential_[0]));
  cplx inv = inverse(m);
  sweep_[0] = off * inv;
  rhs_[0] *= inv;
  for (std::size_t j = 1; j < n; ++j) {
    m = cplx(1.0, half * (kinetic + potential_[j])) - off * sweep_[j - 1];
    inv = inverse(m);
    sweep_[j] = off * inv;
    rhs_[j] = (rhs_[j] - off * rhs_[j - 1]) * inv;
  }
  psi[n - 1] = rhs_[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) psi[j] = rhs_[j] - sweep_[j] * psi[j + 1];
  field.t += dt;
}

WavefunctionField step_crank_nicolson(const WavefunctionField& field, const DeltaModel& model,
                                      const WellParams& p) {
  CrankNicolson stepper(field.grid, model, p);
  WavefunctionField next = field;
  stepper.step(next);
  return next;
}

void evolve(const WavefunctionField& initial, const DeltaModel& model, const WellParams& p,
            double t_final, int sample_every, const SnapshotSink& sink) {
  if (sample_every < 1) throw std::invalid_argument("evolve: sample_every must be >= 1");
  if (t_final < initial.t) throw std::invalid_argument("evolve: t_final precedes the initial time");
  check_field(initial);

  WavefunctionField field = initial;
  sink(field);
  const double span = t_final - initial.t;
  if (span <= 0.0) return;

  const auto steps = static_cast<long>(std::ceil(span / initial.grid.dt - 1e-9));
  GridSpec grid = initial.grid;
  grid.dt = span / static_cast<double>(steps);
  field.grid = grid;
  CrankNicolson stepper(grid, model, p);

  for (long s = 1; s <= steps; ++s) {
    try {
      stepper.step(field);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "evolve: step failed at t = " << field.t << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
    field.t = initial.t + static_cast<double>(s) * grid.dt;
    if (s % sample_every == 0 || s == steps) sink(field);
  }
}

std::vector<WavefunctionField> evolve(const WavefunctionField& initial, const DeltaModel& model,
                                      const WellParams& p, double t_final, int sample_every) {
  std::vector<WavefunctionField> out;
  evolve(initial, model, p, t_final, sample_every,
         [&out](const WavefunctionField& f) { out.push_back(f); });
  return out;
}

}  // namespace deltatrap::oracle
