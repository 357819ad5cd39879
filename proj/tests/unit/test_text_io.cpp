#include "doctest.h"

#include <sstream>

#include "uos/random.hpp"
#include "uos/text_io.hpp"

using namespace uos;

TEST_CASE("matrix text round trip is exact, with and without labels") {
  Rng rng(3);
  const Matrix x = gaussian_matrix(3, 4, rng) * 1e-3;
  const std::vector<int> labels{0, 2, 1, 0};

  std::ostringstream os;
  write_matrix(os, x, &labels);
  std::istringstream is(os.str());
  const auto back = read_matrix(is);
  CHECK(back.data == x);
  REQUIRE(back.labels.has_value());
  CHECK(*back.labels == labels);
  CHECK(os.str().substr(0, 4) == "3 4\n");
  CHECK(os.str().find("labels: 1 3 2 1\n") != std::string::npos);

  std::ostringstream plain;
  write_matrix(plain, x);
  std::istringstream pis(plain.str());
  CHECK_FALSE(read_matrix(pis).labels.has_value());
}

TEST_CASE("matrix text errors") {
  for (const char* bad : {"", "2\n", "2 2\n1 2\n", "1 2\n1 2 3\n", "1 2\n1 x\n", "1 1\n1\nlabels: 1 2\n",
                          "1 1\n1\nlabels: 0\n", "1 1\n1\ngarbage\n"}) {
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_matrix(is), Error);
  }
}

TEST_CASE("vector text round trip") {
  Vector v(3);
  v << 0.1, -2.0 / 3.0, 1e300;
  std::ostringstream os;
  write_vector(os, v);
  std::istringstream is(os.str());
  CHECK(read_vector(is) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("lists and key-value files") {
  CHECK(parse_int_list("2, 3,4") == std::vector<int>{2, 3, 4});
  CHECK_THROWS_AS(parse_int_list("2,,3"), Error);
  CHECK_THROWS_AS(parse_int_list("2,a"), Error);
  CHECK(join_ints({1, 2, 3}, ';') == "1;2;3");

  std::istringstream is("# comment\n m = 4 \n\nranks = 1,2\n");
  const auto kv = parse_key_values(is);
  CHECK(kv.at("m").value == "4");
  CHECK(kv.at("ranks").value == "1,2");
  CHECK(kv.at("ranks").line == 4);

  std::istringstream dup("m = 1\nm = 2\n");
  CHECK_THROWS_AS(parse_key_values(dup), Error);
  std::istringstream noeq("m 1\n");
  CHECK_THROWS_AS(parse_key_values(noeq), Error);
}
