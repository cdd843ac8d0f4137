#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "topcap/error.hpp"
#include "topcap/features.hpp"
#include "topcap/rng.hpp"

using namespace topcap;

namespace {

PersistenceDiagram random_diagram(Rng& rng, std::size_t n) {
  PersistenceDiagram dg{1, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double b = rng.uniform();
    dg.points.push_back({b, b + 0.01 + rng.uniform() * rng.uniform()});
  }
  dg.canonicalize();
  return dg;
}

// Counts by direct interval tests against the grid's own edges.
std::vector<std::size_t> naive_bins(const PersistenceDiagram& dg, const DensityGrid& g, double cutoff) {
  double max_life = 0.0;
  for (const auto& p : dg.points) max_life = std::max(max_life, p.lifetime());
  std::vector<std::size_t> counts(g.bins_x() * g.bins_y(), 0);
  for (const auto& p : dg.points) {
    if (p.lifetime() > cutoff * max_life) continue;
    for (std::size_t ix = 0; ix < g.bins_x(); ++ix) {
      const bool last_x = ix + 1 == g.bins_x();
      if (!(p.birth >= g.x_edges[ix] && (p.birth < g.x_edges[ix + 1] || (last_x && p.birth <= g.x_edges[ix + 1]))))
        continue;
      for (std::size_t iy = 0; iy < g.bins_y(); ++iy) {
        const bool last_y = iy + 1 == g.bins_y();
        const double l = p.lifetime();
        if (l >= g.y_edges[iy] && (l < g.y_edges[iy + 1] || (last_y && l <= g.y_edges[iy + 1])))
          ++counts[ix * g.bins_y() + iy];
      }
    }
  }
  return counts;
}

Eigen::VectorXd covariance_spectrum(const PointCloud& cloud) {
  Eigen::MatrixXd x(cloud.size(), cloud.dimension());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = 0; j < cloud.dimension(); ++j) x(i, j) = cloud.point(i)[j];
  const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(cloud.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Eigen::VectorXd ev = solver.eigenvalues().reverse();
  return ev;
}

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("extract_feature") {
    auto f = extract_feature("r1", Voicing::voiced, PersistenceDiagram{1, {{0.2, 1.4}}});
    REQUIRE(accepted(f));
    const auto& rec = std::get<FeatureRecord>(f);
    CHECK(rec.record_id == "r1");
    CHECK(rec.birth == 0.2);
    CHECK(rec.lifetime == doctest::Approx(1.2).epsilon(1e-15));

    auto empty = extract_feature("r2", Voicing::voiceless, PersistenceDiagram{1, {}});
    REQUIRE_FALSE(accepted(empty));
    CHECK(std::get<Rejection>(empty).reason == RejectReason::empty_diagram);

    auto tie = extract_feature("r3", Voicing::voiced, PersistenceDiagram{1, {{0.375, 0.875}, {0.125, 0.625}}});
    CHECK(std::get<FeatureRecord>(tie).birth == 0.125);

    CHECK_THROWS_AS(extract_feature("r4", Voicing::voiced, PersistenceDiagram{0, {{0, 1}}}), InvalidArgument);
  }

  TEST_CASE("extract_feature scales with the diagram") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      auto dg = random_diagram(rng, 10);
      const double alpha = 0.5 + rng.uniform();
      PersistenceDiagram scaled{1, {}};
      for (const auto& p : dg.points) scaled.points.push_back({alpha * p.birth, alpha * p.death});
      const auto a = std::get<FeatureRecord>(extract_feature("a", Voicing::voiced, dg));
      const auto b = std::get<FeatureRecord>(extract_feature("b", Voicing::voiced, scaled));
      CHECK(b.birth == alpha * a.birth);
      CHECK(b.lifetime == doctest::Approx(alpha * a.lifetime).epsilon(1e-12));
    }
  }

  TEST_CASE("features csv") {
    std::vector<FeatureRecord> recs = {{"a", Voicing::voiced, 0.1, 0.7}, {"b", Voicing::voiceless, 0.3, 0.2}};
    const auto text = format_features_csv(recs);
    CHECK(text.rfind("record_id,label,birth,lifetime\n", 0) == 0);
    CHECK(parse_features_csv(text) == recs);
    CHECK_THROWS_AS(parse_features_csv("id,label\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_features_csv("record_id,label,birth,lifetime\na,voiced,0.1,0\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_features_csv("record_id,label,birth,lifetime\na,nasal,0.1,1\n"), InvalidArgument);
  }

  TEST_CASE("density counts points below the cutoff") {
    PersistenceDiagram dg{1, {}};
    for (int i = 0; i < 9; ++i) dg.points.push_back({0.1 * i, 0.1 * i + 0.05 * (i + 1)});
    dg.points.push_back({0.2, 2.2});  // the dominant point
    const auto g = lower_region_density(dg);
    std::size_t expect = 0;
    for (const auto& p : dg.points) expect += p.lifetime() <= 0.5 * 2.0;
    CHECK(g.total() == expect);
    CHECK(g.bins_x() == 16);
    CHECK(g.bins_y() == 16);
    CHECK_FALSE(g.degenerate);
  }

  TEST_CASE("single-point diagram gives an all-zero grid") {
    const auto g = lower_region_density(PersistenceDiagram{1, {{0.3, 1.0}}});
    CHECK(g.total() == 0);
    CHECK(g.degenerate);
    CHECK(g.counts.size() == 16 * 16);
  }

  TEST_CASE("density matches naive binning") {
    Rng rng(100);
    const auto dg = random_diagram(rng, 100);
    const auto g = lower_region_density(dg, 8, 8, 0.5);
    CHECK(g.counts == naive_bins(dg, g, 0.5));
    CHECK(g.x_edges.size() == 9);
    // Edges span the retained points.
    double lo = INFINITY, hi = -INFINITY, max_life = 0.0;
    for (const auto& p : dg.points) max_life = std::max(max_life, p.lifetime());
    for (const auto& p : dg.points)
      if (p.lifetime() <= 0.5 * max_life) {
        lo = std::min(lo, p.birth);
        hi = std::max(hi, p.birth);
      }
    CHECK(g.x_edges.front() == lo);
    CHECK(g.x_edges.back() == hi);
  }

  TEST_CASE("density is invariant to point order") {
    Rng rng(101);
    auto dg = random_diagram(rng, 60);
    const auto g = lower_region_density(dg, 5, 7, 0.6);
    shuffle(dg.points, rng);
    CHECK(lower_region_density(dg, 5, 7, 0.6).counts == g.counts);
  }

  TEST_CASE("density argument checks and json") {
    CHECK_THROWS_AS(lower_region_density(PersistenceDiagram{1, {}}), InvalidArgument);
    CHECK_THROWS_AS(lower_region_density(PersistenceDiagram{1, {{0, 1}}}, 0, 4), InvalidArgument);
    const auto json = format_density_json(lower_region_density(PersistenceDiagram{1, {{0, 1}, {0, 0.2}}}));
    CHECK(json.find("\"counts\"") != std::string::npos);
    CHECK(json.find("\"x_edges\"") != std::string::npos);
  }

  TEST_CASE("pca of planar data in 100-space") {
    Rng rng(7);
    std::vector<double> u(100), v(100);
    for (auto& x : u) x = rng.normal();
    for (auto& x : v) x = rng.normal();
    std::vector<double> coords;
    for (int i = 0; i < 80; ++i) {
      const double a = 3.0 * rng.normal(), b = rng.normal();
      for (std::size_t j = 0; j < 100; ++j) coords.push_back(a * u[j] + b * v[j] + 5.0);
    }
    const PointCloud cloud(100, coords);
    const auto proj = pca3(cloud);
    CHECK(proj.explained_ratio[2] < 1e-8);

    const auto ev = covariance_spectrum(cloud);
    const double total = ev.sum();
    CHECK(proj.explained_ratio[0] == doctest::Approx(ev(0) / total).epsilon(1e-8));
    CHECK(proj.explained_ratio[1] == doctest::Approx(ev(1) / total).epsilon(1e-8));
  }

  TEST_CASE("pca ratios follow the covariance spectrum") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t d = 4 + trial;
      std::vector<double> coords;
      for (int i = 0; i < 60; ++i)
        for (std::size_t j = 0; j < d; ++j) coords.push_back(rng.normal() * (1.0 + j));
      const PointCloud cloud(d, coords);
      const auto proj = pca3(cloud);
      const auto ev = covariance_spectrum(cloud);
      for (int k = 0; k < 3; ++k)
        CHECK(proj.explained_ratio[k] == doctest::Approx(ev(k) / ev.sum()).epsilon(1e-7));
    }
  }

  TEST_CASE("isotropic gaussian cloud has near-equal ratios") {
    Rng rng(9);
    std::vector<double> coords(3 * 3000);
    for (auto& x : coords) x = rng.normal();
    const auto proj = pca3(PointCloud(3, coords));
    for (double r : proj.explained_ratio) CHECK(std::abs(r - 1.0 / 3.0) < 0.1);
  }

  TEST_CASE("pca invariants") {
    Rng rng(10);
    std::vector<double> coords;
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 6; ++j) coords.push_back(rng.normal() * (j + 1));
    const PointCloud cloud(6, coords);
    const auto proj = pca3(cloud);
    const auto& r = proj.explained_ratio;
    CHECK(r[0] >= r[1]);
    CHECK(r[1] >= r[2]);
    CHECK(r[0] + r[1] + r[2] <= 1.0 + 1e-9);
    for (double x : r) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }

    // Projection contracts distances.
    for (int k = 0; k < 20; ++k) {
      const std::size_t i = rng.index(50), j = rng.index(50);
      std::vector<double> a(cloud.point(i).begin(), cloud.point(i).end());
      std::vector<double> b(cloud.point(j).begin(), cloud.point(j).end());
      CHECK(dist3(proj.points[i], proj.points[j]) <= oracle::euclid(a, b) + 1e-9);
    }

    // Translation leaves the projected shape unchanged.
    std::vector<double> shifted(coords);
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 10.0 + (i % 6);
    const auto moved = pca3(PointCloud(6, shifted));
    for (std::size_t i = 0; i < 50; i += 7)
      for (std::size_t j = 0; j < 50; j += 5)
        CHECK(std::abs(dist3(moved.points[i], moved.points[j]) - dist3(proj.points[i], proj.points[j])) <= 1e-9);
  }

  TEST_CASE("pca rank deficiency and size limits") {
    // Collinear points: one component only.
    std::vector<double> coords;
    for (int i = 0; i < 10; ++i) coords.insert(coords.end(), {1.0 * i, 2.0 * i, -1.0 * i});
    const auto proj = pca3(PointCloud(3, coords));
    CHECK(proj.explained_ratio[0] == doctest::Approx(1.0));
    CHECK(proj.explained_ratio[1] < 1e-12);
    CHECK(proj.explained_ratio[2] < 1e-12);
    CHECK_THROWS_AS(pca3(PointCloud(2, {0, 0, 1, 1, 2, 2})), InvalidArgument);

    const auto csv = format_pca_csv(proj);
    CHECK(csv.rfind("x,y,z\n", 0) == 0);
    CHECK(format_pca_ratios_json(proj).find("explained_variance_ratio") != std::string::npos);
  }
}
