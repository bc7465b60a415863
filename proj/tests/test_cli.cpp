#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "npduet/cli.hpp"
#include "npduet/errors.hpp"

using namespace npduet;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("harmonic polynomial grammar") {
  {
    const auto b = parse_harmonic_polynomial("x");
    REQUIRE(b.size() == 2);
    CHECK(b[1] == Complex(1, 0));
  }
  {
    const auto b = parse_harmonic_polynomial("x^2-y^2");
    REQUIRE(b.size() == 3);
    CHECK(std::abs(b[2] - Complex(1, 0)) < 1e-15);
  }
  {
    // x y = Im(z^2)/2 = Re(-i z^2 / 2)
    const auto b = parse_harmonic_polynomial("x*y");
    REQUIRE(b.size() == 3);
    CHECK(std::abs(b[2] - Complex(0, -0.5)) < 1e-15);
  }
  {
    const auto b = parse_harmonic_polynomial("2*x + 3*y - 1");
    REQUIRE(b.size() == 2);
    CHECK(std::abs(b[0] - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(b[1] - Complex(2, -3)) < 1e-15);  // Re((2-3i) z) = 2x + 3y
  }
  {
    // x^3 - 3 x y^2 = Re z^3
    const auto b = parse_harmonic_polynomial("x^3 - 3*x*y^2");
    REQUIRE(b.size() == 4);
    CHECK(std::abs(b[3] - Complex(1, 0)) < 1e-14);
  }
  CHECK_THROWS_AS(parse_harmonic_polynomial("x^2"), ConfigError);      // not harmonic
  CHECK_THROWS_AS(parse_harmonic_polynomial("x^2+y^2"), ConfigError);  // not harmonic
  CHECK_THROWS_AS(parse_harmonic_polynomial("z"), ConfigError);        // unknown identifier
}

TEST_CASE("conductivity parsing") {
  CHECK(parse_conductivity("inf") == std::numeric_limits<double>::infinity());
  CHECK(parse_conductivity("0") == 0.0);
  CHECK(parse_conductivity("2.5") == 2.5);
  CHECK_THROWS_AS(parse_conductivity("-1"), ConfigError);
  CHECK_THROWS_AS(parse_conductivity("abc"), ConfigError);
}

TEST_CASE("solve subcommand is byte-deterministic and carries the exact header") {
  const std::string out1 = "/tmp/npduet_test_solve1.csv";
  const std::string out2 = "/tmp/npduet_test_solve2.csv";
  const std::vector<std::string> args = {"solve", "--r1",  "1",   "--r2",    "1",    "--eps", "0.01",
                                         "--k1",  "inf",   "--k2", "inf",    "--source", "x",
                                         "--grid", "-3:3:-2:2:12"};
  auto run_to = [&](const std::string& path) {
    auto a = args;
    a.push_back("--out");
    a.push_back(path);
    return run_cli(a);
  };
  CHECK(run_to(out1) == 0);
  CHECK(run_to(out2) == 0);
  const std::string s1 = slurp(out1), s2 = slurp(out2);
  CHECK(s1 == s2);
  CHECK(s1.substr(0, s1.find('\n')) == "x,y,zone,u,ux,uy,uxx,uxy,uyy");
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("spectrum subcommand prints the closed-form eigenvalues") {
  const std::string out = "/tmp/npduet_test_spectrum.csv";
  CHECK(run_cli({"spectrum", "--r1", "1.2", "--r2", "0.8", "--eps", "0.05", "--nmax", "8", "--out", out}) == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,parity,eigenvalue,mode_norm,C+,C-,a+,a-");
  const DiskPair g = derive_geometry(1.2, 0.8, 0.05);
  std::string line;
  int n = 1;
  int rows = 0;
  while (std::getline(in, line) && n <= 8) {
    std::stringstream ss(line);
    std::string ns, ps, ev;
    std::getline(ss, ns, ',');
    std::getline(ss, ps, ',');
    std::getline(ss, ev, ',');
    const double expect = (ps == "+" ? -0.5 : 0.5) * std::pow(g.rho, n);
    CHECK(std::stod(ev) == doctest::Approx(expect).epsilon(1e-12));
    ++rows;
    if (rows % 2 == 0) ++n;
  }
  CHECK(rows == 16);
  std::remove(out.c_str());
}

TEST_CASE("config file keys and flag overrides") {
  const std::string cfgpath = "/tmp/npduet_test_cfg.json";
  {
    std::ofstream cfg(cfgpath);
    cfg << R"({"r1": 1.2, "r2": 0.8, "eps": 0.05, "k1": "5", "k2": "10", "source": "x",
               "nmax": 4, "format": "csv"})";
  }
  const std::string out1 = "/tmp/npduet_test_cfg1.csv";
  const std::string out2 = "/tmp/npduet_test_cfg2.csv";
  CHECK(run_cli({"spectrum", "--config", cfgpath, "--out", out1}) == 0);
  CHECK(run_cli({"spectrum", "--r1", "1.2", "--r2", "0.8", "--eps", "0.05", "--k1", "5", "--k2", "10",
                 "--source", "x", "--nmax", "4", "--out", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));
  // flag overrides the file key
  const std::string out3 = "/tmp/npduet_test_cfg3.csv";
  CHECK(run_cli({"spectrum", "--config", cfgpath, "--nmax", "2", "--out", out3}) == 0);
  CHECK(slurp(out3) != slurp(out1));
  std::remove(cfgpath.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(out3.c_str());
}

TEST_CASE("exit codes distinguish validation from numerical errors") {
  // unknown flag
  CHECK(run_cli({"solve", "--nope", "1"}) == 1);
  // bad geometry (validation)
  CHECK(run_cli({"solve", "--r1", "-1", "--r2", "1", "--eps", "0.1"}) == 1);
  // non-harmonic source (validation)
  CHECK(run_cli({"solve", "--r1", "1", "--r2", "1", "--eps", "0.1", "--source", "x^2"}) == 1);
  // missing eps
  CHECK(run_cli({"solve", "--r1", "1", "--r2", "1"}) == 1);
}

TEST_CASE("json output mirrors the csv fields") {
  const std::string out = "/tmp/npduet_test_json.json";
  CHECK(run_cli({"spectrum", "--r1", "1", "--r2", "1", "--eps", "0.05", "--nmax", "2", "--format", "json",
                 "--out", out}) == 0);
  const std::string s = slurp(out);
  CHECK(s.find("\"eigenvalue\"") != std::string::npos);
  CHECK(s.find("\"mode_norm\"") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("sweep subcommand emits records and a slope fit") {
  const std::string out = "/tmp/npduet_test_sweep.csv";
  CHECK(run_cli({"sweep", "--r1", "1", "--r2", "1", "--eps-list", "1e-2,2e-3,4e-4", "--k1", "inf",
                 "--k2", "inf", "--source", "x", "--order", "1", "--out", out}) == 0);
  const std::string s = slurp(out);
  CHECK(s.substr(0, s.find('\n')) == "eps,rho,lambda1,lambda2,order,gap_max,bound_value,ratio,u_sup");
  CHECK(s.find("slope,r_squared") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("oracle subcommand emits the cross-validation report") {
  const std::string out = "/tmp/npduet_test_oracle.csv";
  CHECK(run_cli({"oracle", "--r1", "1", "--r2", "1", "--eps", "0.2", "--k1", "5", "--k2", "10",
                 "--source", "x", "--nodes", "64", "--out", out}) == 0);
  const std::string s = slurp(out);
  CHECK(s.find("max_rel_error") != std::string::npos);
  CHECK(s.find("symmetrization_residual") != std::string::npos);
  CHECK(s.find("half_eigenvalue_multiplicity,2") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("decompose subcommand reports weights") {
  const std::string out = "/tmp/npduet_test_dec.csv";
  const DiskPair g = derive_geometry(1.2, 0.8, 0.05);
  std::ostringstream bump;
  bump << g.c1 << ",0,0.2";
  CHECK(run_cli({"decompose", "--r1", "1.2", "--r2", "0.8", "--eps", "0.05", "--k1", "5", "--k2", "10",
                 "--bump", bump.str(), "--out", out}) == 0);
  const std::string s = slurp(out);
  CHECK(s.find("w1") != std::string::npos);
  CHECK(s.find("residual_integral_D1") != std::string::npos);
  std::remove(out.c_str());
}
