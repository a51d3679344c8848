#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "odeident/errors.hpp"
#include "odeident/io.hpp"
#include "odeident/randgen.hpp"

using namespace odeident;

TEST_CASE("format_double round-trips") {
  SeededRng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-30.0, 30.0));
    const double y = std::stod(format_double(x));
    REQUIRE(std::memcmp(&x, &y, sizeof(double)) == 0);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("matrix CSV parsing") {
  const Mat M = parse_matrix_csv("1,2,3\n4,5,6\n");
  REQUIRE(M.rows() == 2);
  REQUIRE(M.cols() == 3);
  CHECK(M(1, 2) == 6.0);
  CHECK(parse_matrix_csv(" 1.5 , -2e3\r\n").cols() == 2);
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n3\n"), Error);
  CHECK_THROWS_AS(parse_matrix_csv("1,x\n"), Error);
  CHECK_THROWS_AS(parse_matrix_csv(""), Error);
  CHECK(parse_matrix_csv(matrix_to_csv(M)) == M);
}

TEST_CASE("matrix and vector files") {
  const auto dir = std::filesystem::temp_directory_path() / "odeident_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "m.csv").string();
  Mat M(2, 2);
  M << 1.0 / 3.0, -2.5e-300, 7.0, 1e300;
  write_matrix_csv(path, M);
  CHECK(read_matrix_csv(path) == M);
  write_matrix_csv(path, Eigen::Vector3d(1, 2, 3));
  CHECK(read_vector_csv(path) == Eigen::Vector3d(1, 2, 3));
  write_matrix_csv(path, Mat(Eigen::RowVector3d(1, 2, 3)));
  CHECK(read_vector_csv(path) == Eigen::Vector3d(1, 2, 3));
  CHECK_THROWS_AS(read_matrix_csv((dir / "missing.csv").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("long format") {
  const auto g = TimeGrid({0.0, 0.5, 1.25});
  Mat Y(2, 3);
  Y << 1, 2, 3, 4, 5, 6;
  const std::string text = long_to_csv(g, Y);
  CHECK(text.rfind("time,dim,value\n", 0) == 0);
  const auto obs = parse_long_csv(text);
  CHECK(obs.grid == g);
  CHECK(obs.Y == Y);
  // Row order does not matter.
  const auto shuffled = parse_long_csv("time,dim,value\n0.5,2,5\n0,1,1\n0,2,4\n0.5,1,2\n");
  CHECK(shuffled.Y(1, 1) == 5.0);
  CHECK_THROWS_AS(parse_long_csv("time,dim,value\n0,1,1\n0,1,2\n"), Error);
  CHECK_THROWS_AS(parse_long_csv("time,dim,value\n0,1,1\n0.5,2,2\n"), Error);
  CHECK_THROWS_AS(parse_long_csv("t,d,v\n0,1,1\n"), Error);
}
