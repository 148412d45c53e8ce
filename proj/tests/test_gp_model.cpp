#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "sumoss/errors.hpp"
#include "sumoss/gp_model.hpp"

using namespace sumoss;

namespace {

std::vector<Position> random_points(std::mt19937_64& rng, std::size_t n, double box = 5.0) {
  std::uniform_real_distribution<double> u(0.0, box);
  std::vector<Position> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

// Dense covariance written out directly from the kernel formula.
Eigen::MatrixXd dense_cov(const std::vector<Position>& pts, const KernelModel& m) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      k(i, j) = std::exp(-(dx * dx + dy * dy) / (2 * m.phi * m.phi)) + (i == j ? m.jitter : 0.0);
    }
  return k;
}

// sigma^2_{y|A} as the reciprocal of the (y, y) entry of the inverse joint
// covariance, via LU. Independent of the Cholesky/solve route.
double precision_route_variance(const Position& y, const std::vector<Position>& cond,
                                const KernelModel& m) {
  std::vector<Position> all = cond;
  all.push_back(y);
  const Eigen::MatrixXd inv = dense_cov(all, m).fullPivLu().inverse();
  return 1.0 / inv(inv.rows() - 1, inv.cols() - 1);
}

// MI(A) from LU determinants.
double lu_mi(const std::vector<std::size_t>& a, const std::vector<Position>& v,
             const KernelModel& m) {
  std::vector<Position> in;
  std::vector<Position> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    (std::find(a.begin(), a.end(), i) != a.end() ? in : out).push_back(v[i]);
  }
  auto logdet = [&](const std::vector<Position>& p) {
    return std::log(dense_cov(p, m).fullPivLu().determinant());
  };
  return 0.5 * (logdet(in) + logdet(out) - logdet(v));
}

}  // namespace

TEST_CASE("kernel_cov follows the squared-exponential form") {
  KernelModel m;
  m.phi = 1.7;
  CHECK(kernel_cov({1.0, 2.0}, {1.0, 2.0}, m) == 1.0);
  CHECK(kernel_cov({0.0, 0.0}, {1.7, 0.0}, m) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(kernel_cov({0.0, 0.0}, {0.0, 1.7}, m) == doctest::Approx(0.6065306597126334));
  CHECK(kernel_cov({0.0, 0.0}, {17.0, 0.0}, m) <= std::exp(-50.0));

  double prev = 1.0;
  for (double r = 0.1; r < 8.0; r += 0.1) {
    const double k = kernel_cov({0.0, 0.0}, {r, 0.0}, m);
    CHECK(k < prev);
    prev = k;
  }
  CHECK_THROWS_AS(kernel_cov({NAN, 0.0}, {0.0, 0.0}, m), std::invalid_argument);
  CHECK_THROWS_AS(kernel_cov({0.0, 0.0}, {INFINITY, 0.0}, m), std::invalid_argument);
}

TEST_CASE("build_cov") {
  KernelModel m;
  m.phi = 1.0;
  m.jitter = 1e-3;

  SUBCASE("single position") {
    const Position p[] = {{3.0, 1.0}};
    const auto c = build_cov(p, m);
    REQUIRE(c.entries.rows() == 1);
    CHECK(c.entries(0, 0) == doctest::Approx(1.001));
  }

  SUBCASE("collinear points spaced phi apart") {
    const Position p[] = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    const auto c = build_cov(p, m);
    CHECK(c.entries(0, 1) == doctest::Approx(std::exp(-0.5)));
    CHECK(c.entries(1, 2) == doctest::Approx(std::exp(-0.5)));
    CHECK(c.entries(0, 2) == doctest::Approx(std::exp(-2.0)));
    CHECK(c.entries(2, 0) == c.entries(0, 2));
    for (int i = 0; i < 3; ++i) CHECK(c.entries(i, i) == m.prior_variance());
  }

  SUBCASE("coincident points") {
    const Position p[] = {{1.0, 1.0}, {1.0, 1.0}};
    m.jitter = 0.0;
    CHECK_THROWS_AS(build_cov(p, m), DegenerateInputError);
    m.jitter = 1e-6;
    CHECK_NOTHROW(build_cov(p, m));
  }

  SUBCASE("invalid input") {
    CHECK_THROWS(build_cov(std::span<const Position>{}, m));
    const Position p[] = {{NAN, 0.0}};
    CHECK_THROWS(build_cov(p, m));
    m.phi = 0.0;
    const Position q[] = {{0.0, 0.0}};
    CHECK_THROWS(build_cov(q, m));
  }
}

TEST_CASE("build_cov is symmetric and positive semidefinite") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phi(0.5, 3.0);
  for (int t = 0; t < 100; ++t) {
    KernelModel m;
    m.phi = phi(rng);
    m.jitter = (t % 2 == 0) ? 0.0 : 1e-6;
    const auto pts = random_points(rng, 2 + t % 12);
    const auto c = build_cov(pts, m);
    CHECK((c.entries - c.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.entries);
    CHECK(eig.eigenvalues().minCoeff() >= m.jitter - 1e-9);
  }
}

TEST_CASE("conditional_variance") {
  KernelModel m;

  SUBCASE("empty conditioning returns the prior") {
    CHECK(conditional_variance({1.0, 2.0}, {}, m) == m.prior_variance());
  }

  SUBCASE("self conditioning collapses to the jitter scale") {
    m.jitter = 1e-6;
    const Position y{2.0, 2.0};
    const Position cond[] = {y};
    const double v = conditional_variance(y, cond, m);
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(2e-6).epsilon(1e-3));
  }

  SUBCASE("matches the precision-matrix route on random 4-point sets") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      m.phi = 0.8 + 0.05 * t;
      const auto pts = random_points(rng, 5);
      const std::vector<Position> cond(pts.begin(), pts.begin() + 4);
      CHECK(conditional_variance(pts[4], cond, m) ==
            doctest::Approx(precision_route_variance(pts[4], cond, m)).epsilon(1e-9));
    }
  }

  SUBCASE("coincident conditioning at zero jitter is degenerate") {
    m.jitter = 0.0;
    const Position cond[] = {{1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(conditional_variance({0.0, 0.0}, cond, m), DegenerateInputError);
  }
}

TEST_CASE("conditional variance never grows with a larger conditioning set") {
  std::mt19937_64 rng(5);
  KernelModel m;
  for (int t = 0; t < 200; ++t) {
    const auto pts = random_points(rng, 10);
    const Position y = random_points(rng, 1).front();
    const std::size_t a = rng() % 5;
    const std::size_t b = a + 1 + rng() % 5;
    const std::vector<Position> sa(pts.begin(), pts.begin() + static_cast<long>(a));
    const std::vector<Position> sb(pts.begin(), pts.begin() + static_cast<long>(b));
    const double va = conditional_variance(y, sa, m);
    const double vb = conditional_variance(y, sb, m);
    CHECK(vb <= va + 1e-10);
    CHECK(va <= m.prior_variance());
    CHECK(vb > 0.0);
  }
}

TEST_CASE("delta_gain") {
  KernelModel m;

  SUBCASE("empty sets give zero") {
    CHECK(delta_gain({1.0, 1.0}, {}, {}, m) == 0.0);
  }

  SUBCASE("symmetric configuration gives zero") {
    const Position sel[] = {{-1.0, 0.0}};
    const Position oth[] = {{1.0, 0.0}};
    CHECK(std::abs(delta_gain({0.0, 0.0}, sel, oth, m)) <= 1e-15);
  }

  SUBCASE("equals the MI difference on a |V|=6 instance") {
    std::mt19937_64 rng(99);
    const auto v = random_points(rng, 6);
    const std::vector<std::size_t> a{0, 3};
    const Position sel[] = {v[0], v[3]};
    const Position oth[] = {v[2], v[4], v[5]};
    const double expected = lu_mi({0, 3, 1}, v, m) - lu_mi(a, v, m);
    CHECK(std::abs(delta_gain(v[1], sel, oth, m) - expected) <= 1e-8);
  }

  SUBCASE("underflowing variances are reported") {
    CHECK_THROWS_AS(delta_from_variances(0.0, 1.0), DegenerateInputError);
    CHECK_THROWS_AS(delta_from_variances(1.0, -1e-18), DegenerateInputError);
  }
}

TEST_CASE("mi_exact") {
  KernelModel m;

  SUBCASE("far-apart sensors are independent") {
    const Position v[] = {{0.0, 0.0}, {40.0, 0.0}, {0.0, 40.0}, {40.0, 40.0}};
    const std::size_t a[] = {0, 3};
    CHECK(std::abs(mi_exact(a, v, m)) <= 1e-6);
  }

  SUBCASE("singleton reduces to a variance ratio") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
      const auto v = random_points(rng, 7);
      const std::size_t a[] = {static_cast<std::size_t>(t % 7)};
      std::vector<Position> rest;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (i != a[0]) rest.push_back(v[i]);
      const double expected =
          0.5 * std::log(m.prior_variance() / precision_route_variance(v[a[0]], rest, m));
      CHECK(mi_exact(a, v, m) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  SUBCASE("agrees with LU determinants") {
    std::mt19937_64 rng(21);
    const auto v = random_points(rng, 9);
    const std::vector<std::size_t> a{1, 4, 6};
    CHECK(mi_exact(a, v, m) == doctest::Approx(lu_mi(a, v, m)).epsilon(1e-9));
  }

  SUBCASE("rejects empty, full and repeated selections") {
    const Position v[] = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS(mi_exact(std::span<const std::size_t>{}, v, m));
    const std::size_t all[] = {0, 1, 2};
    CHECK_THROWS(mi_exact(all, v, m));
    const std::size_t rep[] = {1, 1};
    CHECK_THROWS(mi_exact(rep, v, m));
    const std::size_t oob[] = {5};
    CHECK_THROWS(mi_exact(oob, v, m));
  }
}

TEST_CASE("incremental gains telescope to the MI of the final set") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> phi(0.5, 3.0);
  for (int t = 0; t < 30; ++t) {
    KernelModel m;
    m.phi = phi(rng);
    const auto v = random_points(rng, 10);
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double sum = 0.0;
    std::vector<Position> sel;
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<Position> others;
      for (std::size_t i = k + 1; i < v.size(); ++i) others.push_back(v[order[i]]);
      sum += delta_gain(v[order[k]], sel, others, m);
      sel.push_back(v[order[k]]);
    }
    const std::vector<std::size_t> final_set(order.begin(), order.begin() + 4);
    CHECK(std::abs(sum - mi_exact(final_set, v, m)) <= 1e-8);
  }
}

TEST_CASE("delta_gain matches the log-det oracle on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> phi(0.5, 3.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    KernelModel m;
    m.phi = phi(rng);
    const std::size_t n = 4 + rng() % 7;
    const auto v = random_points(rng, n);
    const std::size_t k = 1 + rng() % (n - 2);
    std::vector<std::size_t> a;
    std::vector<Position> sel;
    std::vector<Position> others;
    for (std::size_t i = 0; i < k; ++i) {
      a.push_back(i);
      sel.push_back(v[i]);
    }
    for (std::size_t i = k + 1; i < n; ++i) others.push_back(v[i]);
    auto ay = a;
    ay.push_back(k);
    worst = std::max(worst, std::abs(delta_gain(v[k], sel, others, m) -
                                     (mi_exact(ay, v, m) - mi_exact(a, v, m))));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("prior mean has no effect on any output") {
  std::mt19937_64 rng(4);
  const auto v = random_points(rng, 8);
  KernelModel a;
  KernelModel b = a;
  b.prior_mean = 123.456;
  const Position sel[] = {v[0], v[1]};
  const Position oth[] = {v[3], v[4], v[5], v[6], v[7]};
  const std::size_t idx[] = {0, 1};
  CHECK(kernel_cov(v[0], v[1], a) == kernel_cov(v[0], v[1], b));
  CHECK(conditional_variance(v[2], sel, a) == conditional_variance(v[2], sel, b));
  CHECK(delta_gain(v[2], sel, oth, a) == delta_gain(v[2], sel, oth, b));
  CHECK(mi_exact(idx, v, a) == mi_exact(idx, v, b));
}

TEST_CASE("delta_gain diminishes on nested sets below |V|/2") {
  std::mt19937_64 rng(77);
  KernelModel m;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 10;
    const auto v = random_points(rng, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    // |A| < |B| < |V|/2, A a prefix of B; y is outside B.
    const std::size_t b = 2 + rng() % 3;
    const std::size_t a = 1 + rng() % (b - 1);
    const Position y = v[order[n - 1]];
    auto gain = [&](std::size_t k) {
      std::vector<Position> sel;
      std::vector<Position> others;
      for (std::size_t i = 0; i < k; ++i) sel.push_back(v[order[i]]);
      for (std::size_t i = k; i + 1 < n; ++i) others.push_back(v[order[i]]);
      return delta_gain(y, sel, others, m);
    };
    CHECK(gain(a) >= gain(b) - 1e-9);
  }
}
