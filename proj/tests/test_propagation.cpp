#include <catch2/catch.hpp>

#include <numbers>
#include <random>

#include "heod/dyson.hpp"
#include "heod/liouville.hpp"
#include "heod/models.hpp"
#include "heod/propagation.hpp"
#include "heod/transforms.hpp"

using namespace heod;

namespace {

Generator constant_generator(const Eigen::MatrixXcd& m) {
  Generator g(static_cast<int>(m.rows()));
  g.add_channel(m);
  return g;
}

StateVector basis_state(int dim, int flat) {
  StateVector v = StateVector::Zero(dim);
  v(flat - 1) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("zero generator keeps the state constant") {
  const Generator g = constant_generator(Eigen::MatrixXcd::Zero(4, 4));
  StateVector rho0(4);
  rho0 << Complex(0.2, 0.1), Complex(0.0, -0.3), Complex(0.5, 0.0), Complex(0.3, 0.0);
  const auto traj = propagate_state(g, rho0, TimeGrid(3.0, 50), 10);
  for (const auto& s : traj.samples) CHECK((s - rho0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.samples.front() == rho0);
}

TEST_CASE("constant diagonal generator reproduces scalar phases") {
  const double omega = 2.0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = -omega;
  const Generator g = constant_generator(m);

  // i y' = -omega y, so y(t) = e^{i omega t} y(0).  Over one period the
  // classical scheme accumulates (w dt)^5/120 per step: about 3e-9 at 400
  // steps, below 1e-10 from roughly 4000 steps on.
  const double period = 2.0 * std::numbers::pi / omega;
  const Complex expected = std::polar(1.0, omega * period);

  const auto coarse = propagate_state(g, basis_state(2, 1), TimeGrid(period, 400), 0);
  CHECK(std::abs(coarse.final_sample()(0) - expected) <= 1e-8);

  const auto fine = propagate_state(g, basis_state(2, 1), TimeGrid(period, 4000), 0);
  CHECK(std::abs(fine.final_sample()(0) - expected) <= 1e-10);
}

TEST_CASE("field-free benchmark matches the closed-form populations") {
  const auto b = benchmark_three_level();
  ControlField quiet = b.field;
  for (auto& c : quiet.components) c.amplitude = 0.0;
  const Generator g = liouvillian_generator(b.system, quiet);
  const auto map = index_map(3);

  const auto traj = propagate_state(g, basis_state(9, 1), b.grid, 256);
  const double g12 = b.system.eta * 0.089;
  const double g23 = b.system.eta * 0.194;
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto exact = analytic_field_free(g12, g23, traj.times[i]);
    for (int m = 1; m <= 3; ++m)
      worst = std::max(worst,
                       std::abs(traj.samples[i](map.population(m) - 1).real() - exact[m - 1]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("halving dt improves accuracy by at least a factor 12") {
  // stiffer rates so the coarse-grid error sits far above machine noise
  LevelSystem sys;
  sys.dim = 3;
  sys.energies = {0.0, 1.0, 2.2};
  sys.dipole = Eigen::MatrixXd::Zero(3, 3);
  sys.dipole(0, 1) = sys.dipole(1, 0) = 1.0;
  sys.dipole(1, 2) = sys.dipole(2, 1) = 1.0;
  sys.channels = {{2, 1, 0.3}, {1, 2, 0.3}, {3, 2, 0.7}, {2, 3, 0.7}};
  sys.eta = 1.0;
  ControlField quiet;
  quiet.total_time = 10.0;
  quiet.envelope_width = 2.0;
  const Generator g = liouvillian_generator(sys, quiet);
  const auto map = index_map(3);

  auto max_error = [&](int steps) {
    const auto traj = propagate_state(g, basis_state(9, 1), TimeGrid(10.0, steps), 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto exact = analytic_field_free(0.3, 0.7, traj.times[i]);
      for (int m = 1; m <= 3; ++m)
        worst = std::max(worst, std::abs(traj.samples[i](map.population(m) - 1).real() -
                                         exact[m - 1]));
    }
    return worst;
  };

  const double coarse = max_error(40);
  const double fine = max_error(80);
  CHECK(coarse > 1e-12);
  CHECK(coarse / fine >= 12.0);
}

TEST_CASE("propagation is linear in the initial state") {
  const auto toy = two_level_toy(0.2, 0.15);
  const Generator g = liouvillian_generator(toy.system, toy.field);
  const TimeGrid grid(toy.field.total_time, 800);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  StateVector r1(4), r2(4);
  for (int i = 0; i < 4; ++i) {
    r1(i) = Complex(dist(rng), dist(rng));
    r2(i) = Complex(dist(rng), dist(rng));
  }
  const Complex a(0.7, -0.2), c(-0.4, 0.9);

  const auto ya = propagate_state(g, r1, grid).final_sample();
  const auto yb = propagate_state(g, r2, grid).final_sample();
  const auto yc = propagate_state(g, (a * r1 + c * r2).eval(), grid).final_sample();
  CHECK((yc - (a * ya + c * yb)).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("identical inputs give bit-identical outputs") {
  const auto b = benchmark_three_level();
  const Generator g = liouvillian_generator(b.system, b.field);
  const TimeGrid grid(b.field.total_time, 2048);
  const auto y1 = propagate_state(g, basis_state(9, 1), grid).final_sample();
  const auto y2 = propagate_state(g, basis_state(9, 1), grid).final_sample();
  for (int i = 0; i < 9; ++i) {
    CHECK(y1(i).real() == y2(i).real());
    CHECK(y1(i).imag() == y2(i).imag());
  }
}

TEST_CASE("evolution operator columns equal basis-state propagations") {
  const auto toy = two_level_toy(0.3, 0.2);
  const Generator g = liouvillian_generator(toy.system, toy.field);
  const TimeGrid grid(toy.field.total_time, 600);

  const auto u = propagate_evolution(g, grid).final_sample();
  CHECK(u.rows() == 4);
  for (int col = 1; col <= 4; ++col) {
    const auto y = propagate_state(g, basis_state(4, col), grid).final_sample();
    CHECK((u.col(col - 1) - y).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("zero generator yields the identity evolution") {
  const Generator g = constant_generator(Eigen::MatrixXcd::Zero(4, 4));
  const auto u = propagate_evolution(g, TimeGrid(2.0, 20)).final_sample();
  CHECK((u - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unencoded evolution element equals the order-5 truncated Dyson sum") {
  const auto b = benchmark_three_level();
  const auto tg = transformed_picture(b.system, b.field);
  const TimeGrid grid(b.field.total_time, 8192);
  const QuadratureGrid qgrid(b.field.total_time, 8192);

  const auto u = propagate_evolution(tg.generator, grid).final_sample();
  const auto s5 = truncated_sum(tg.generator, 1, 9, 5, qgrid);

  // bound the residual by the order-6 moduli; later orders shrink fast enough
  // that doubling covers the tail
  const auto all6 = enumerate_pathways(tg.generator.support(), 1, 9, 6, false);
  std::vector<Pathway> order6;
  for (const auto& p : all6)
    if (p.order() == 6) order6.push_back(p);
  double residual6 = 0.0;
  for (const auto& amp : pathway_amplitudes(tg.generator, order6, qgrid))
    residual6 += std::abs(amp);

  CHECK(std::abs(u(8, 0) - s5) <= 2.0 * residual6);
}

TEST_CASE("runaway integration reports the failing step") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = Complex(0.0, 1e8);  // i y' = i k y -> exponential growth
  const Generator g = constant_generator(m);
  try {
    propagate_state(g, basis_state(2, 1), TimeGrid(100.0, 100));
    FAIL("expected numeric_overflow_error");
  } catch (const numeric_overflow_error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("time grid validation") {
  CHECK_THROWS_AS(TimeGrid(1.0, 0), invalid_model_error);
  CHECK_THROWS_AS(TimeGrid(-1.0, 10), invalid_model_error);
  CHECK(TimeGrid(10.0, 4).dt() == Approx(2.5));
}
