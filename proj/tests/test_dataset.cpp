#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "surveyq/dataset.hpp"
#include "surveyq/error.hpp"

using namespace surveyq;

namespace {

FeatureSchema tiny_schema() {
  return FeatureSchema("y", {{"a", FeatureKind::Continuous, 0, 10},
                             {"b", FeatureKind::Binary, 0, 1},
                             {"c", FeatureKind::Ordinal, 1, 5}});
}

}  // namespace

TEST_CASE("schema validation") {
  CHECK_THROWS_AS(FeatureSchema("y", {{"a", FeatureKind::Binary, 0, 1},
                                      {"a", FeatureKind::Binary, 0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FeatureSchema("y", {{"", FeatureKind::Binary, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureSchema("y", {{"a", FeatureKind::Binary, 2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FeatureSchema("y", {{"y", FeatureKind::Binary, 0, 1}}), std::invalid_argument);

  const auto brfss = FeatureSchema::brfss();
  CHECK(brfss.feature_count() == 21);
  CHECK(brfss.label_name() == "HeartDiseaseorAttack");
  CHECK(brfss.index_of("GenHlth") >= 0);
  CHECK(brfss.index_of("NotAColumn") == -1);

  const auto sub = brfss.select({0, 3});
  CHECK(sub.feature_count() == 2);
  CHECK(sub.feature(0).name == "HighBP");
  CHECK(sub.feature(1).name == "BMI");
}

TEST_CASE("schema json round trip") {
  testutil::TempDir tmp;
  const auto schema = tiny_schema();
  testutil::write_file(tmp.file("schema.json"), schema.to_json());
  const auto loaded = FeatureSchema::load_json(tmp.file("schema.json"));
  CHECK(loaded.label_name() == "y");
  REQUIRE(loaded.feature_count() == 3);
  CHECK(loaded.feature(2).name == "c");
  CHECK(loaded.feature(2).kind == FeatureKind::Ordinal);
  CHECK(loaded.feature(2).min_value == 1);
  CHECK(loaded.feature(2).max_value == 5);
}

TEST_CASE("load_csv parses values, labels, and row order") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("d.csv"),
                       "y,a,b,c\n"
                       "1,1.5,0,3\n"
                       "0,2.25,1,5\n");
  const auto d = load_csv(tmp.file("d.csv"), tiny_schema());
  REQUIRE(d.rows() == 2);
  REQUIRE(d.cols() == 3);
  CHECK(d.label(0) == 1);
  CHECK(d.label(1) == 0);
  CHECK(d.value(0, 0) == 1.5);
  CHECK(d.value(1, 0) == 2.25);
  CHECK(d.value(1, 2) == 5.0);
  CHECK_FALSE(d.normalized());
}

TEST_CASE("load_csv accepts permuted columns") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("d.csv"),
                       "c,y,b,a\n"
                       "3,1,0,1.5\n");
  const auto d = load_csv(tmp.file("d.csv"), tiny_schema());
  REQUIRE(d.rows() == 1);
  CHECK(d.label(0) == 1);
  CHECK(d.value(0, 0) == 1.5);
  CHECK(d.value(0, 1) == 0.0);
  CHECK(d.value(0, 2) == 3.0);
}

TEST_CASE("load_csv empty body yields zero rows") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("d.csv"), "y,a,b,c\n");
  const auto d = load_csv(tmp.file("d.csv"), tiny_schema());
  CHECK(d.rows() == 0);
  const auto counts = class_counts(d);
  CHECK(counts.negatives == 0);
  CHECK(counts.positives == 0);
}

TEST_CASE("load_csv error paths name the offender") {
  testutil::TempDir tmp;
  const auto schema = tiny_schema();

  CHECK_THROWS_AS(load_csv(tmp.file("missing.csv"), schema), InputError);

  testutil::write_file(tmp.file("bad_header.csv"), "y,a,b,WRONG\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad_header.csv"), schema),
                       doctest::Contains("WRONG"), InputError);

  testutil::write_file(tmp.file("missing_col.csv"), "y,a,b\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("missing_col.csv"), schema),
                       doctest::Contains("'c'"), InputError);

  testutil::write_file(tmp.file("bad_cell.csv"), "y,a,b,c\n1,oops,0,3\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad_cell.csv"), schema),
                       doctest::Contains("line 2, column 'a'"), InputError);

  testutil::write_file(tmp.file("bad_label.csv"), "y,a,b,c\n2,1,0,3\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad_label.csv"), schema),
                       doctest::Contains("label"), InputError);

  testutil::write_file(tmp.file("ragged.csv"), "y,a,b,c\n1,1,0\n");
  CHECK_THROWS_AS(load_csv(tmp.file("ragged.csv"), schema), InputError);
}

TEST_CASE("load_csv range policy warns or rejects") {
  testutil::TempDir tmp;
  const auto schema = tiny_schema();
  testutil::write_file(tmp.file("d.csv"), "y,a,b,c\n0,99,0,3\n");

  std::vector<std::string> warnings;
  CsvLoadOptions warn_opts;
  warn_opts.warnings = &warnings;
  const auto d = load_csv(tmp.file("d.csv"), schema, warn_opts);
  CHECK(d.rows() == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("'a'") != std::string::npos);

  CsvLoadOptions strict;
  strict.range_policy = RangePolicy::Error;
  CHECK_THROWS_AS(load_csv(tmp.file("d.csv"), schema, strict), InputError);
}

TEST_CASE("csv round trip is exact") {
  testutil::TempDir tmp;
  surveyq::Rng rng(99);
  const std::size_t n = 50, p = 4;
  std::vector<double> values(n * p);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n * p; ++i) values[i] = rng.next_double() * 7.25 - 3.0;
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.next_below(2));
  const FeatureSchema schema = FeatureSchema::synthetic(p);
  // synthetic() declares [0,1]; widen to keep the round trip warning-free
  std::vector<FeatureSpec> specs = schema.features();
  for (auto& s : specs) {
    s.min_value = -10;
    s.max_value = 10;
  }
  const Dataset d(FeatureSchema("label", specs), values, labels);

  save_csv(d, tmp.file("rt.csv"));
  const auto loaded = load_csv(tmp.file("rt.csv"), d.schema());
  REQUIRE(loaded.rows() == n);
  CHECK(loaded.values() == d.values());
  CHECK(loaded.labels() == d.labels());

  save_csv(loaded, tmp.file("rt2.csv"));
  CHECK(testutil::read_file(tmp.file("rt.csv")) == testutil::read_file(tmp.file("rt2.csv")));
}

TEST_CASE("class_counts direct tallies") {
  const FeatureSchema schema = FeatureSchema::synthetic(1);
  const Dataset d(schema, {0.1, 0.2, 0.3}, {1, 1, 0});
  const auto counts = class_counts(d);
  CHECK(counts.negatives == 1);
  CHECK(counts.positives == 2);
  CHECK(counts.negatives + counts.positives == d.rows());
}

TEST_CASE("normalize: min-max arithmetic") {
  const FeatureSchema schema = FeatureSchema("y", {{"a", FeatureKind::Continuous, 0, 10},
                                                   {"k", FeatureKind::Continuous, 0, 10},
                                                   {"bin", FeatureKind::Binary, 0, 1}});
  const Dataset d(schema, {2, 5, 0, 4, 5, 1, 6, 5, 0}, {0, 1, 0});
  const auto norm = normalize(d);
  CHECK(norm.normalized());
  // column [2,4,6] -> [0, .5, 1]
  CHECK(norm.value(0, 0) == 0.0);
  CHECK(norm.value(1, 0) == 0.5);
  CHECK(norm.value(2, 0) == 1.0);
  // constant column -> all zeros
  CHECK(norm.value(0, 1) == 0.0);
  CHECK(norm.value(1, 1) == 0.0);
  CHECK(norm.value(2, 1) == 0.0);
  // {0,1} column is a fixed point
  CHECK(norm.value(0, 2) == 0.0);
  CHECK(norm.value(1, 2) == 1.0);
  CHECK(norm.value(2, 2) == 0.0);

  CHECK_THROWS_AS(normalize(norm), std::invalid_argument);
}

TEST_CASE("normalize transform is reproducible on the training data") {
  const auto raw = synthesize(FeatureSchema::synthetic(5), 40, 40, {0}, 0.5, 21);
  const auto norm = normalize(raw);
  const auto again = normalize_with(raw, norm.scalers());
  REQUIRE(again.values().size() == norm.values().size());
  for (std::size_t i = 0; i < norm.values().size(); ++i) {
    CHECK(std::abs(again.values()[i] - norm.values()[i]) <= 1e-12);
  }
}

TEST_CASE("normalize_with clips out-of-range held-out values") {
  const FeatureSchema schema = FeatureSchema::synthetic(1);
  const Dataset test(schema, {-0.5, 0.25, 9.0}, {0, 0, 1});
  const auto scaled = normalize_with(test, {{0.0, 1.0}});
  CHECK(scaled.value(0, 0) == 0.0);
  CHECK(scaled.value(1, 0) == 0.25);
  CHECK(scaled.value(2, 0) == 1.0);
}

TEST_CASE("synthesize: determinism and structure") {
  const auto schema = FeatureSchema::synthetic(4);
  const auto d1 = synthesize(schema, 30, 20, {1}, 1.0, 77);
  const auto d2 = synthesize(schema, 30, 20, {1}, 1.0, 77);
  CHECK(d1.values() == d2.values());
  CHECK(d1.labels() == d2.labels());

  const auto counts = class_counts(d1);
  CHECK(counts.negatives == 30);
  CHECK(counts.positives == 20);

  // strength 1.0: signal column equals the label exactly
  for (std::size_t r = 0; r < d1.rows(); ++r) {
    CHECK(d1.value(r, 1) == static_cast<double>(d1.label(r)));
  }

  const auto all_neg = synthesize(schema, 10, 0, {}, 0.0, 5);
  CHECK(class_counts(all_neg).positives == 0);
  CHECK(all_neg.rows() == 10);

  CHECK_THROWS_AS(synthesize(schema, 5, 5, {9}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("take_rows carries scaling state") {
  const auto norm = testutil::planted_fixture(10, 10, 3, {0}, 1.0, 9);
  const auto sub = norm.take_rows({0, 5, 7});
  CHECK(sub.rows() == 3);
  CHECK(sub.normalized());
  CHECK(sub.scalers().size() == 3);
}
