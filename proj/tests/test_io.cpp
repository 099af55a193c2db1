#include "qot/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

using namespace qot;

TEST_CASE("density round-trip is exact") {
  const DensityMatrix r = random_density(3, 2, 17);
  const json j = json::parse(density_to_json(r).dump());
  CHECK(j["kind"] == "density");
  CHECK(density_from_json(j).op == r.op);
}

TEST_CASE("cost round-trip keeps sites and tag") {
  const CostOperator c = cq_projector(3);
  const CostOperator back = cost_from_json(json::parse(cost_to_json(c).dump()));
  CHECK(back.op == c.op);
  CHECK(back.sites == c.sites);
  CHECK(back.tag == c.tag);
  json bare = matrix_to_json(swap_operator(2).op);
  CHECK(cost_from_json(bare).sites == std::vector<int>{2, 2});
  json odd = matrix_to_json(CMatrix::Identity(3, 3));
  CHECK_THROWS_AS(cost_from_json(odd), Error);
}

TEST_CASE("matrix parsing rejects bad input") {
  json nan = matrix_to_json(CMatrix::Identity(2, 2) / 2.0);
  nan["entries"][0][1] = json::array({std::numeric_limits<double>::quiet_NaN(), 0.0});
  CHECK_THROWS_AS(matrix_from_json(nan), Error);
  CHECK_THROWS_AS(matrix_to_json(CMatrix::Constant(1, 1, std::numeric_limits<double>::infinity())), Error);
  const json ragged = json::parse(R"({"entries": [[1, 0], [0]]})");
  CHECK_THROWS_AS(matrix_from_json(ragged), Error);
  const json dim = json::parse(R"({"dim": 3, "entries": [[1, 0], [0, 0]]})");
  CHECK_THROWS_AS(matrix_from_json(dim), Error);
  const json word = json::parse(R"({"entries": [["a"]]})");
  CHECK_THROWS_AS(matrix_from_json(word), Error);
  // Real numbers are accepted as entries.
  const json real = json::parse(R"({"entries": [[0.5, 0], [0, 0.5]]})");
  CHECK(density_from_json(real).op == CMatrix::Identity(2, 2) / 2.0);
  const json notpsd = json::parse(R"({"entries": [[1.5, 0], [0, -0.5]]})");
  CHECK_THROWS_AS(density_from_json(notpsd), Error);
  const json wrongkind = json::parse(R"({"kind": "cost", "entries": [[1]]})");
  CHECK_THROWS_AS(density_from_json(wrongkind), Error);
}

TEST_CASE("probability inputs") {
  CHECK(probability_from_json(json::parse("[0.25, 0.75]"))(1) == 0.75);
  CHECK(probability_from_json(json::parse(R"({"kind":"probability","entries":[0.5,0.5]})"))(0) == 0.5);
  CHECK(probability_from_json(density_to_json(diagonal_state(random_probability(3, 1)))).size() == 3);
  CHECK_THROWS_AS(probability_from_json(json::parse("[0.5, 0.6]")), Error);
  CHECK_THROWS_AS(probability_from_json(json::parse("[-0.5, 1.5]")), Error);
  CHECK_THROWS_AS(probability_from_json(density_to_json(random_density(2, 2, 1))), Error);
}

TEST_CASE("plan JSON") {
  RMatrix x(2, 3);
  x << 0.1, 0.2, 0.0, 0.3, 0.0, 0.4;
  CHECK(plan_from_json(json::parse(plan_to_json(x).dump())) == x);
  json bad = plan_to_json(x);
  bad["cols"] = 2;
  CHECK_THROWS_AS(plan_from_json(bad), Error);
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(g) * std::pow(10.0, (k % 21) - 10);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1e-20) == "9.9999999999999995e-21");
}

TEST_CASE("solution JSON carries the certificate check") {
  const CouplingProblem p = make_problem(random_density(2, 2, 1), random_density(2, 2, 2), cq_projector(2));
  const SdpSolution s = solve(p);
  const CertificateReport c = check_certificate(p, s);
  const json j = solution_to_json(s, &c);
  CHECK(j["value"].get<double>() == s.value);
  CHECK(j["status"] == "Optimal");
  CHECK(j["potentials"].size() == 2);
  CHECK(j["check"]["pass"] == true);
  CHECK_FALSE(solution_to_json(s).contains("check"));
}

TEST_CASE("file I/O") {
  const std::string path = "qot_io_test.json";
  write_json_file(path, density_to_json(random_density(2, 2, 9)));
  CHECK(density_from_json(read_json_file(path)).op == random_density(2, 2, 9).op);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{not json", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_json_file(path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("does/not/exist.json"), Error);
}

TEST_CASE("CSV writer") {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"a", "b"});
  w.row({format_double(0.5), "x"});
  CHECK(os.str() == "a,b\n0.5,x\n");
}
