#include <clocale>
#include <cmath>

#include "doctest.h"
#include "imbreg/error.hpp"
#include "imbreg/serialize.hpp"

using namespace imbreg;

TEST_CASE("measure JSON round trip") {
  const std::vector<RelevanceMeasure> ms{
      NormalRelevance(1.5, 0.25),
      UniformRelevance(-1, 3),
      UniformRelevance(0, 2, 0.25),
      HistogramRelevance({0, 1, 3}, {0.25, 0.75}),
      PointMassRelevance({-2, 0.5}, {0.5, 0.5}),
  };
  for (const auto& m : ms) {
    const Json j = measure_to_json(m);
    const auto back = measure_from_json(Json::parse(j.dump()));
    CHECK(measure_to_json(back) == j);
    for (double x : {-3.0, 0.0, 0.7, 2.5}) CHECK(cdf(back, x) == cdf(m, x));
  }
}

TEST_CASE("malformed measures are usage errors") {
  CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"kind":"cauchy"})")), UsageError);
  CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"kind":"normal","mean":0})")), UsageError);
  CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"kind":"normal","mean":0,"std":-1})")),
                  UsageError);
  CHECK_THROWS_AS(measure_from_json(Json::parse(R"([1,2])")), UsageError);
  CHECK_THROWS_AS(
      measure_from_json(Json::parse(R"({"kind":"histogram","edges":[0,1],"masses":[0.5,0.5]})")),
      UsageError);
}

TEST_CASE("number formatting is exact and locale independent") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
  const char* old = std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_fixed(1.25, 3) == "1.250");
  if (old) std::setlocale(LC_NUMERIC, "C");
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("provenance block") {
  const Json cfg{{"a", 1}};
  const Json p = provenance(42, cfg);
  CHECK(p.at("version") == kVersion);
  CHECK(p.at("seed") == 42);
  CHECK(p.at("config_hash").get<std::string>().size() == 16);
  CHECK(provenance(42, Json{{"a", 2}}).at("config_hash") != p.at("config_hash"));
}

TEST_CASE("binned TSV marks empty bins") {
  BinnedReport r;
  r.edges = {0, 1, 2};
  r.counts = {3, 0};
  r.mae = {0.5, std::nullopt};
  CHECK(binned_tsv(r) == "bin_center\tcount\tmae\n0.5\t3\t0.5\n1.5\t0\tnull\n");
  const Json j = to_json(r);
  CHECK(j.at("mae")[1].is_null());
}

TEST_CASE("model JSON round trip") {
  MlpConfig cfg;
  const auto net = Mlp<double>::init(cfg, 8);
  const auto back = mlp_from_json(Json::parse(mlp_to_json(net).dump()));
  REQUIRE(back.layers().size() == net.layers().size());
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    CHECK(back.layers()[l].weights == net.layers()[l].weights);
    CHECK(back.layers()[l].bias == net.layers()[l].bias);
  }
  CHECK(back.loss() == net.loss());
  Json broken = mlp_to_json(net);
  broken["layers"][0]["rows"] = 3;
  CHECK_THROWS_AS(mlp_from_json(broken), UsageError);
}
