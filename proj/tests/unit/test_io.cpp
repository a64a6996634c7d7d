#include <doctest.h>

#include <filesystem>

#include "rlab/io.hpp"

using namespace rlab;

TEST_CASE("json round trip is exact") {
  const auto dir = std::filesystem::temp_directory_path() / "rlab_io_test";
  std::filesystem::create_directories(dir);
  for (const auto& mu : {cantor({4, {0, 3}, 4}), random_flat({1024, 60, 5, 6.0, 50}), circle(64, 0.3),
                         reflect(cantor({4, {0, 1, 3}, 3}))}) {
    const auto path = dir / "m.json";
    save_measure(mu, path);
    const auto back = load_measure(path);
    CHECK(back == mu);
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) CHECK(back.atoms()[i].weight == mu.atoms()[i].weight);
    CHECK(back.descriptor().kind == mu.descriptor().kind);
    CHECK(back.descriptor().seed == mu.descriptor().seed);
  }
  const auto j = to_json(dirac(2, 8, {1, 2}));
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["atoms"][0][0] == 1);
  CHECK(j["atoms"][0][1] == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed measure files") {
  auto j = to_json(cantor({4, {0, 3}, 2}));
  j["atoms"][0][1] = 0.9;
  CHECK_THROWS(measure_from_json(j));
  auto k = to_json(cantor({4, {0, 3}, 2}));
  k["schema_version"] = 99;
  CHECK_THROWS(measure_from_json(k));
  CHECK_THROWS(measure_from_json(nlohmann::json::parse("{}")));
}

TEST_CASE("fnv digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
