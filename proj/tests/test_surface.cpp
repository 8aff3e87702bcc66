#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include "dq/error.hpp"
#include "dq/surface.hpp"

using namespace dq;

TEST_CASE("cohomology dimensions") {
  CohomologyDims disk = cohomology_dims({0, 1});
  CHECK(disk.absolute == std::array<int, 3>{1, 0, 0});
  CHECK(disk.relative == std::array<int, 3>{0, 0, 1});
  CHECK(disk.boundary == std::array<int, 2>{1, 1});

  CohomologyDims torus2 = cohomology_dims({1, 2});
  CHECK(torus2.absolute == std::array<int, 3>{1, 3, 0});
  CHECK(torus2.relative == std::array<int, 3>{0, 3, 1});
  CHECK(torus2.boundary == std::array<int, 2>{2, 2});

  CohomologyDims annulus = cohomology_dims({0, 2});
  CHECK(annulus.absolute == std::array<int, 3>{1, 1, 0});
  CHECK(annulus.relative == std::array<int, 3>{0, 1, 1});
  CHECK(annulus.boundary == std::array<int, 2>{2, 2});

  CHECK_THROWS_AS(cohomology_dims({0, 0}), DimensionError);
  CHECK_THROWS_AS(cohomology_dims({2, 0}), DimensionError);
  CHECK_THROWS_AS(cohomology_dims({-1, 1}), DimensionError);
}

TEST_CASE("euler characteristic across the grid") {
  for (int g = 0; g <= 3; ++g)
    for (int n = 1; n <= 4; ++n) {
      CohomologyDims d = cohomology_dims({g, n});
      int chi = d.absolute[0] - d.absolute[1] + d.absolute[2];
      CHECK(chi == 2 - 2 * g - n);
      CHECK(d.boundary[0] - d.boundary[1] == 0);
      CHECK(tadpole_admissible({g, n}).euler == chi);
    }
}

TEST_CASE("tadpole admissibility picks out the annulus") {
  CHECK_FALSE(tadpole_admissible({0, 1}).admissible);
  CHECK(tadpole_admissible({0, 1}).euler == 1);
  CHECK(tadpole_admissible({0, 2}).admissible);
  CHECK(tadpole_admissible({0, 2}).euler == 0);
  CHECK_FALSE(tadpole_admissible({1, 1}).admissible);
  CHECK(tadpole_admissible({1, 1}).euler == -1);
  for (int g = 0; g <= 3; ++g)
    for (int n = 1; n <= 4; ++n)
      CHECK(tadpole_admissible({g, n}).admissible == (g == 0 && n == 2));
}

TEST_CASE("diagonal class entries") {
  DiagonalClassSpec disk = diagonal_class({0, 1});
  REQUIRE(disk.entries.size() == 1);
  CHECK(disk.entries[0].left == "alpha0");
  CHECK(disk.entries[0].right == "d_beta1");
  CHECK(disk.entries[0].coeff == Rational(1));

  DiagonalClassSpec oneone = diagonal_class({1, 1});
  REQUIRE(oneone.entries.size() == 3);
  CHECK(oneone.entries[1].left == "gamma1_1");
  CHECK(oneone.entries[1].right == "gamma1_2");
  CHECK(oneone.entries[1].coeff == Rational(1));
  CHECK(oneone.entries[2].left == "gamma1_2");
  CHECK(oneone.entries[2].right == "gamma1_1");
  CHECK(oneone.entries[2].coeff == Rational(-1));

  CHECK(diagonal_class({0, 3}).entries.size() == 3);

  for (int g = 0; g <= 3; ++g)
    for (int n = 1; n <= 4; ++n)
      CHECK(diagonal_class({g, n}).entries.size() == static_cast<size_t>(2 * g + n));
}

TEST_CASE("surface info json") {
  auto j = nlohmann::ordered_json::parse(surface_info_json({0, 2}));
  CHECK(j["format"] == "surface/1");
  CHECK(j["euler"] == 0);
  CHECK(j["tadpole_admissible"] == true);
  CHECK(j["h_surface"] == nlohmann::ordered_json::array({1, 1, 0}));
  CHECK(j["diagonal_class"].size() == 2);
}
