// Copyright 2026 The PCS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <unistd.h>

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "pcs/combinatorics.hpp"
#include "pcs/dataset.hpp"
#include "pcs/error.hpp"
#include "pcs/fixtures.hpp"
#include "pcs/rng.hpp"
#include "test_util.hpp"

using pcs::Dataset;
using pcs::Error;
using pcs::ErrorKind;
using testutil::matrix;
using testutil::TempFile;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected pcs::Error");
  return ErrorKind::kParse;
}

}  // namespace

TEST_CASE("load_csv reads six rows of two columns") {
  TempFile f("0,0\n1,0.5\n2,1.5\n3,0.25\n4,2\n5,-1\n");
  const auto data = pcs::load_csv(f.path());
  CHECK(data.n() == 6);
  CHECK(data.p() == 2);
  CHECK(data.rows()(1, 1) == doctest::Approx(0.5));
  CHECK(data.rows()(5, 1) == -1.0);
}

TEST_CASE("load_csv accepts whitespace delimiters and an auto-detected header") {
  TempFile f("x y\n0 0\n1 0.5\n2\t1.5\n3 0.25\n4 2\n");
  const auto data = pcs::load_csv(f.path());
  CHECK(data.n() == 5);
  CHECK(data.rows()(2, 1) == doctest::Approx(1.5));
  const auto table = pcs::parse_csv("x,y\n1,2\n", pcs::HeaderMode::kAuto);
  REQUIRE(table.header.size() == 2);
  CHECK(table.header[1] == "y");
}

TEST_CASE("load_csv names duplicated rows") {
  TempFile f("1,0\n1,0\n0,1\n2,2\n3,5\n");
  try {
    pcs::load_csv(f.path());
    FAIL("duplicates accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()).find("1,2") != std::string::npos);
  }
  pcs::DatasetOptions allow;
  allow.allow_duplicates = true;
  CHECK(pcs::load_csv(f.path(), pcs::HeaderMode::kAuto, allow).n() == 5);
}

TEST_CASE("n must exceed p+1") {
  TempFile f("0,0\n1,0\n0,1\n");
  try {
    pcs::load_csv(f.path());
    FAIL("n = p+1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()).find("n>p+1") != std::string::npos);
  }
  // p = 1 violates p + 1 > 2.
  CHECK(kind_of([] { Dataset(matrix({{0}, {1}, {2}, {3}})); }) == ErrorKind::kValidation);
}

TEST_CASE("parse errors: malformed numbers and ragged rows") {
  CHECK(kind_of([] { pcs::parse_csv("1,2\n3,abc\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { pcs::parse_csv("1,2\n3,4,5\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { pcs::parse_csv("1,2\n3,\n"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { pcs::load_csv("/nonexistent/file.csv"); }) == ErrorKind::kParse);
}

TEST_CASE("non-finite values are rejected with the row named") {
  try {
    pcs::Dataset(pcs::parse_csv("0,0\n1,1\n2,inf\n3,1\n").values);
    FAIL("inf accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("only the genuine block is duplicate-checked") {
  auto m = matrix({{0, 0}, {1, 2}, {2, 1}, {9, 9}, {9, 9}});
  CHECK_THROWS_AS(Dataset{m}, Error);
  pcs::DatasetOptions opts;
  opts.genuine_rows = 3;
  CHECK(Dataset(m, opts).genuine_rows() == 3);
}

TEST_CASE("default_h") {
  CHECK(pcs::default_h(100, 2).h == 52);
  CHECK(pcs::default_h(6, 2).h == 5);
  CHECK(pcs::default_h(20, 2).h == 12);
  CHECK(pcs::default_h(15, 3).h == 10);
  CHECK_THROWS_AS(pcs::default_h(3, 2), Error);
}

TEST_CASE("default_h is monotone and the bound lies in (0, 1/2]") {
  for (std::size_t p = 2; p <= 8; ++p) {
    for (std::size_t n = p + 2; n <= 200; ++n) {
      const auto h = pcs::default_h(n, p).h;
      CHECK(h >= p + 1);
      CHECK(h <= n);
      CHECK(pcs::default_h(n + 1, p).h >= h);
      if (n > p + 2) CHECK(pcs::default_h(n, p + 1).h >= h);
      const auto bound = pcs::breakdown_bound(n, h);
      CHECK(n - h + 1 >= 1);
      CHECK(bound.value() > 0.0);
      CHECK(bound.value() <= 0.5);
    }
  }
}

TEST_CASE("breakdown_bound") {
  CHECK(pcs::breakdown_bound(100, 52) == pcs::Rational{49, 100});
  CHECK(pcs::breakdown_bound(20, 12) == pcs::Rational{9, 20});
  CHECK(pcs::breakdown_bound(7, 7) == pcs::Rational{1, 7});
  CHECK(pcs::breakdown_bound(20, 12).value() == 0.45);
  CHECK(pcs::breakdown_bound(10, 6).str() == "1/2");
}

TEST_CASE("user h must satisfy p+1 <= h <= n") {
  CHECK(pcs::make_subset_size(10, 2, 3).h == 3);
  CHECK_THROWS_AS(pcs::make_subset_size(10, 2, 2), Error);
  CHECK_THROWS_AS(pcs::make_subset_size(10, 2, 11), Error);
}

TEST_CASE("general position: collinear triple is witnessed") {
  const Dataset data(matrix({{0, 0}, {1, 1}, {2, 2}, {0, 3}, {5, -1}}));
  const auto rep = pcs::check_general_position(data);
  CHECK_FALSE(rep.in_general_position);
  REQUIRE(rep.witness);
  CHECK(*rep.witness == std::vector<std::size_t>{0, 1, 2});
  CHECK(rep.witness_volume <= rep.tol_gp);
}

TEST_CASE("general position: square vertices") {
  const Dataset data(matrix({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  const auto rep = pcs::check_general_position(data);
  CHECK(rep.in_general_position);
  CHECK_FALSE(rep.witness);
  CHECK(rep.subsets_checked == 4);
}

TEST_CASE("general position: 12 collinear points among 20, checked against a triple scan") {
  const auto sc = pcs::fixtures::collinear_majority(12, 8, 3);
  CHECK_FALSE(oracle::planar_general_position(testutil::to_rows(sc.data)));
  const auto rep = pcs::check_general_position(sc.data);
  CHECK_FALSE(rep.in_general_position);
  REQUIRE(rep.witness);
  for (std::size_t r : *rep.witness) {
    CHECK(std::binary_search(sc.line_rows.begin(), sc.line_rows.end(), r));
  }
}

TEST_CASE("general position verdict is permutation invariant and thread independent") {
  pcs::Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = pcs::fixtures::gaussian_rows(12, 2, 100 + trial);
    if (trial % 2 == 0) {
      m.row(5) = 0.5 * (m.row(1) + m.row(9));  // plant a collinear triple
    }
    const Dataset data(m);
    std::vector<Eigen::Index> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 11; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    pcs::Matrix shuffled(12, 2);
    for (Eigen::Index i = 0; i < 12; ++i) shuffled.row(i) = m.row(perm[static_cast<std::size_t>(i)]);
    const auto a = pcs::check_general_position(data);
    const auto b = pcs::check_general_position(Dataset(shuffled));
    CHECK(a.in_general_position == b.in_general_position);
    CHECK(a.in_general_position == (trial % 2 != 0));
    pcs::GeneralPositionOptions threaded;
    threaded.threads = 4;
    const auto c = pcs::check_general_position(data, threaded);
    CHECK(c.in_general_position == a.in_general_position);
    CHECK(c.witness == a.witness);
  }
}

TEST_CASE("general position: cap and sampling") {
  const auto data = Dataset(pcs::fixtures::gaussian_rows(40, 2, 5));
  pcs::GeneralPositionOptions opts;
  opts.enumeration_cap = 100;
  CHECK(kind_of([&] { pcs::check_general_position(data, opts); }) == ErrorKind::kCap);
  opts.allow_sampling = true;
  opts.samples = 500;
  const auto rep = pcs::check_general_position(data, opts);
  CHECK(rep.partial);
  CHECK(rep.in_general_position);
  CHECK(rep.subsets_checked == 500);
}

TEST_CASE("combinatorics helpers agree") {
  CHECK(pcs::binomial(52, 2) == 1326);
  CHECK(pcs::binomial(20, 12) == 125970);
  CHECK(pcs::binomial(5, 7) == 0);
  CHECK(pcs::binomial(200, 100) == pcs::kBinomialOverflow);
  std::vector<std::size_t> comb{0, 1, 2};
  std::uint64_t rank = 0;
  do {
    CHECK(pcs::rank_combination(comb, 7) == rank);
    CHECK(pcs::unrank_combination(rank, 7, 3) == comb);
    ++rank;
  } while (pcs::next_combination(comb, 7));
  CHECK(rank == 35);
}
