#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "inputs.hpp"
#include "json.hpp"
#include "records.hpp"
#include "tmdisk/errors.hpp"

using namespace tmdisk;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "tmdisk");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<Json> records(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

Complex cplx(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

const std::vector<std::string> kFirst = {"--system", "-0.9521,-0.0882,0.2532,-0.1468"};
const std::vector<std::string> kSecond = {"--system", "-0.3307,-0.52903,0.6284,-0.4647"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("complex and number parsing") {
  CHECK(cli::parse_complex("0", "x") == Complex{0.0, 0.0});
  CHECK(cli::parse_complex("-1.5,2e-3", "x") == Complex{-1.5, 2e-3});
  CHECK(cli::parse_complex(" +1 , -2 ", "x") == Complex{1.0, -2.0});
  CHECK_THROWS_AS(cli::parse_complex("1,2,3", "x"), ValidationError);
  CHECK_THROWS_AS(cli::parse_complex("abc", "x"), ValidationError);
  CHECK_THROWS_AS(cli::parse_complex("1,", "x"), ValidationError);
  CHECK_THROWS_AS(cli::parse_number("inf", "x"), ValidationError);
  CHECK_THROWS_AS(cli::parse_number("1.0x", "x"), ValidationError);
}

TEST_CASE("system parsing") {
  const ScatteringAmplitudes a = cli::parse_system("0,0.6,0.8,0", 1e-9);
  CHECK(a.r() == Complex{0.0, 0.6});
  CHECK(a.t() == Complex{0.8, 0.0});
  CHECK_THROWS_AS(cli::parse_system("0,0.6,0.8", 1e-9), ValidationError);
  CHECK_THROWS_AS(cli::parse_system("0.5,0,0.5,0", 1e-9), ValidationError);
}

TEST_CASE("cell spec parsing") {
  const PotentialStack s = cli::parse_cell_spec("1.0:2.0;0:0.5;1.0:2.0");
  REQUIRE(s.segments().size() == 3);
  CHECK(s.segments()[1].height == 0.0);
  CHECK(s.segments()[1].length == 0.5);
  CHECK(s.total_length() == doctest::Approx(4.5));
  CHECK(cli::parse_cell_spec("-2:1;").segments().size() == 1);
  CHECK_THROWS_AS(cli::parse_cell_spec(""), ValidationError);
  CHECK_THROWS_AS(cli::parse_cell_spec("1:2:3"), ValidationError);
  CHECK_THROWS_AS(cli::parse_cell_spec("1:-2"), ValidationError);
}

TEST_CASE("potential file parsing") {
  std::istringstream good("# x V\n0 0\n\n0.5 1.0  # peak\n1 0\n");
  const SampledPotential p = cli::parse_potential(good);
  REQUIRE(p.size() == 3);
  CHECK(p.values()[1] == 1.0);
  std::istringstream three_columns("0 0 1\n1 0 1\n");
  CHECK_THROWS_AS(cli::parse_potential(three_columns), ValidationError);
  std::istringstream one_row("0 0\n");
  CHECK_THROWS_AS(cli::parse_potential(one_row), ValidationError);
  CHECK_THROWS_AS(cli::read_potential_file("/nonexistent/potential.txt"), ValidationError);
}

TEST_CASE("rounding and csv flattening") {
  const cli::Json rounded = cli::rounded(cli::Json{{"x", 0.123456789}, {"y", -0.0}}, 6);
  CHECK(rounded.dump() == R"({"x":0.123457,"y":0.0})");
  std::ostringstream out;
  cli::Emitter emitter(out, cli::OutputFormat::Csv, 6);
  emitter.emit(cli::Json{{"a", 1}, {"z", cli::complex_json({1.0, -2.0})}, {"s", "x,y"}});
  emitter.emit(cli::Json{{"a", 2}, {"z", cli::complex_json({0.5, 0.25})}, {"s", "q"}});
  emitter.emit(cli::Json{{"b", true}, {"n", nullptr}});
  CHECK(out.str() == "a,z_re,z_im,s\n1,1,-2,\"x,y\"\n2,0.5,0.25,q\nb,n\ntrue,\n");
  CHECK(cli::error_record(2, "validation", "bad") ==
        R"({"error":{"code":2,"kind":"validation","message":"bad"}})");
}

TEST_CASE("classify: identity, barrier and malformed flux") {
  auto r = call({"classify", "--r", "0", "--t", "1"});
  REQUIRE(r.code == 0);
  auto rec = records(r.out).at(0);
  CHECK(rec["kind"] == "parabolic");
  CHECK(rec["canonical_parameter"].get<double>() == 0.0);
  CHECK(rec["fixed_points"].empty());

  r = call({"classify", "--barrier", "--E", "0.5", "--V0", "1.0", "--L", "2.0"});
  REQUIRE(r.code == 0);
  rec = records(r.out).at(0);
  CHECK(rec["kind"] == "hyperbolic");
  CHECK(std::abs(rec["residuals"]["det"].get<double>()) < 1e-12);
  CHECK(std::abs(rec["residuals"]["flux"].get<double>()) < 1e-12);

  r = call({"classify", "--r", "0.5", "--t", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  const Json err = Json::parse(r.err);
  CHECK(err["error"]["code"] == 2);
  CHECK(err["error"]["kind"] == "validation");

  r = call({"classify", "--alpha", "2", "--beta", "0.5"});
  CHECK(r.code == 2);
  r = call({"classify", "--r", "0", "--t", "1", "--barrier", "--E", "1", "--V0", "1", "--L", "1"});
  CHECK(r.code == 2);
  r = call({"classify", "--cell", "1:0.5;0:1", "--E", "2"});
  CHECK(r.code == 0);
  CHECK(records(r.out).at(0)["source"]["type"] == "cell");
}

TEST_CASE("barrier command") {
  // E = V0: r = 1/(1+i), t = 1/(1-i) at kL = 2.
  auto r = call({"barrier", "--E", "1", "--V0", "1", "--L", "2"});
  REQUIRE(r.code == 0);
  auto rec = records(r.out).at(0);
  CHECK(rec["regime"] == "threshold");
  CHECK(std::abs(cplx(rec["r"]) - Complex{0.5, -0.5}) < 1e-12);
  CHECK(std::abs(cplx(rec["t"]) - Complex{0.5, 0.5}) < 1e-12);
  CHECK(std::abs(rec["residuals"]["flux"].get<double>()) < 1e-12);

  r = call({"barrier", "--E", "1", "--V0", "0", "--L", "3"});
  rec = records(r.out).at(0);
  CHECK(std::abs(cplx(rec["r"])) == 0.0);
  CHECK(rec["transmittance"].get<double>() == doctest::Approx(1.0));

  CHECK(call({"barrier", "--E", "-1", "--V0", "1", "--L", "1"}).code == 2);
  CHECK(call({"barrier", "--E", "1", "--V0", "1"}).code == 2);
}

TEST_CASE("compose: rounded reference inputs, identity and order") {
  auto r = call(concat(concat({"--tol", "1e-4", "--precision", "17", "compose"}, kFirst), kSecond));
  REQUIRE(r.code == 0);
  const auto rec = records(r.out).at(0);
  // Product route; see the core tests for why these differ from the reference composite.
  CHECK(std::abs(cplx(rec["r"]) - Complex{-0.98566525266988292, -0.088543826103407265}) < 1e-12);
  CHECK(std::abs(cplx(rec["t"]) - Complex{0.063424725848152689, -0.12879343199958385}) < 1e-12);
  CHECK(std::abs(cplx(rec["direct"]["r"]) - cplx(rec["r"])) < 1e-12);
  CHECK(rec["order_gap"]["r"].get<double>() > 0.05);

  // The rounded reference inputs miss flux by about 7e-5, beyond the default tolerance.
  CHECK(call(concat({"compose"}, kFirst)).code == 2);

  r = call({"--precision", "17", "compose", "--system", "0,0.6,0.8,0"});
  REQUIRE(r.code == 0);
  const auto single = records(r.out).at(0);
  CHECK(std::abs(cplx(single["r"]) - Complex{0.0, 0.6}) < 1e-15);
  CHECK(std::abs(cplx(single["t"]) - Complex{0.8, 0.0}) < 1e-15);
  CHECK(single["order_gap"]["r"].get<double>() == 0.0);
}

TEST_CASE("periodic command") {
  const std::vector<std::string> cell = {"--barrier", "--E", "0.5", "--V0", "1", "--L", "0.5"};
  auto closed = call(concat({"--precision", "17", "periodic", "--N", "5", "--closed-form"}, cell));
  auto iterated = call(concat({"--precision", "17", "periodic", "--N", "5", "--iterate"}, cell));
  REQUIRE(closed.code == 0);
  REQUIRE(iterated.code == 0);
  const auto a = records(closed.out), b = records(iterated.out);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(std::abs(cplx(a[i]["z_n"]) - cplx(b[i]["z_n"])) < 1e-10);
    CHECK(a[i]["reflectance"].get<double>() ==
          doctest::Approx(a[i]["reflectance_law"].get<double>()).epsilon(1e-10));
  }
  CHECK(std::abs(cplx(a[4]["z_n"]) - Complex{0.0, -0.9433641629147086}) < 1e-12);

  // N = 1 gives the cell's own r.
  auto bar = records(call({"--precision", "17", "barrier", "--E", "0.5", "--V0", "1", "--L", "0.5"}).out);
  CHECK(std::abs(cplx(a[0]["z_n"]) - cplx(bar.at(0)["r"])) < 1e-15);

  // Parabolic cell: 1 - R_N falls like 1/N^2.
  auto par = records(
      call({"--precision", "17", "periodic", "--N", "400", "--barrier", "--E", "1", "--V0", "1",
            "--L", "2"})
          .out);
  const double d100 = 1.0 - par[99]["reflectance"].get<double>();
  const double d400 = 1.0 - par[399]["reflectance"].get<double>();
  CHECK(d100 / d400 == doctest::Approx(16.0).epsilon(1e-3));

  // Elliptic cells carry no reflectance law.
  auto ell = records(call({"periodic", "--N", "2", "--barrier", "--E", "1.5", "--V0", "1", "--L", "1"}).out);
  CHECK(ell.at(0)["kind"] == "elliptic");
  CHECK(ell.at(0)["reflectance_law"].is_null());

  CHECK(call(concat({"periodic", "--N", "0"}, cell)).code == 2);
  CHECK(call(concat({"periodic", "--N", "3", "--iterate", "--closed-form"}, cell)).code == 2);
}

TEST_CASE("orbit and iterates") {
  // Rotation about the origin keeps |z|.
  auto r = call({"orbit", "--alpha", "0.8,0.6", "--beta", "0", "--z0", "0.5,0.2", "--samples", "20"});
  REQUIRE(r.code == 0);
  const auto pts = records(r.out);
  REQUIRE(pts.size() == 20);
  for (const auto& p : pts) {
    CHECK(p["modulus"].get<double>() == doctest::Approx(std::abs(Complex{0.5, 0.2})));
  }

  // Two samples: the start point and its image.
  r = call({"--precision", "17", "orbit", "--barrier", "--E", "0.5", "--V0", "1", "--L", "0.5",
            "--z0", "0.1,0.1", "--samples", "2"});
  const auto ends = records(r.out);
  auto it = records(call({"--precision", "17", "iterates", "--barrier", "--E", "0.5", "--V0", "1",
                          "--L", "0.5", "--z0", "0.1,0.1", "--N", "1"})
                        .out);
  REQUIRE(ends.size() == 2);
  CHECK(std::abs(cplx(ends[0]["z"]) - Complex{0.1, 0.1}) < 1e-15);
  CHECK(std::abs(cplx(ends[1]["z"]) - cplx(it.at(0)["z"])) < 1e-12);

  // Hyperbolic iterates approach the boundary.
  auto far = records(
      call({"iterates", "--barrier", "--E", "0.5", "--V0", "1", "--L", "2", "--N", "30"}).out);
  REQUIRE(far.size() == 30);
  CHECK(far.back()["modulus"].get<double>() > 0.999999);
  for (std::size_t i = 1; i < far.size(); ++i) {
    CHECK(far[i]["modulus"].get<double>() >= far[i - 1]["modulus"].get<double>());
  }
  CHECK(call({"orbit", "--r", "0", "--t", "1", "--z0", "1.5"}).code == 2);
  CHECK(call({"orbit", "--r", "0", "--t", "1", "--samples", "1"}).code == 2);
}

TEST_CASE("turns command") {
  auto r = call(concat(concat({"--tol", "1e-4", "turns"}, kFirst), kSecond));
  REQUIRE(r.code == 0);
  const auto recs = records(r.out);
  REQUIRE(recs.size() == 5);
  CHECK(recs[0]["role"] == "system_1");
  CHECK(recs[2]["role"] == "composite_12");
  CHECK(recs[4]["role"] == "head_to_tail");
  // The rounded reference inputs miss det = 1 by up to 7e-4, which bounds how well the
  // composite lengths match the product trace.
  for (const auto& rec : recs) {
    const double slack = 10.0 * std::abs(rec["residuals"]["det"].get<double>()) + 1e-9;
    CHECK(2.0 * std::cosh(rec["half_length"].get<double>()) ==
          doctest::Approx(std::abs(rec["trace"].get<double>())).epsilon(slack));
  }
  // Opposite orders: same length, different axis.
  CHECK(recs[2]["half_length"].get<double>() ==
        doctest::Approx(recs[3]["half_length"].get<double>()).epsilon(1e-10));
  CHECK(std::abs(recs[2]["tail_angle"].get<double>() - recs[3]["tail_angle"].get<double>()) > 1e-3);

  // Collinear translations add: r = -i tanh(a), t = 1 / cosh(a) has half-length a.
  auto sys = [](double a) {
    std::ostringstream s;
    s.precision(17);
    s << "0," << -std::tanh(a) << "," << 1.0 / std::cosh(a) << ",0";
    return s.str();
  };
  r = call({"--precision", "17", "turns", "--system", sys(0.3), "--system", sys(0.5)});
  REQUIRE(r.code == 0);
  const auto line = records(r.out);
  CHECK(line[0]["half_length"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(line[2]["half_length"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(line[4]["half_length"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));

  // Exactly normalized systems: composite length matches the product trace.
  r = call({"--precision", "17", "turns", "--system", "0,0.6,0.8,0", "--system", "0.28,0,0.96,0"});
  REQUIRE(r.code == 0);
  for (const auto& rec : records(r.out)) {
    if (rec["half_length"].is_null()) continue;
    CHECK(2.0 * std::cosh(rec["half_length"].get<double>()) ==
          doctest::Approx(std::abs(rec["trace"].get<double>())).epsilon(1e-12));
  }

  // Elliptic systems have no turn.
  CHECK(call({"turns", "--system", "0,0,1,0", "--system", "0,0.6,0.8,0"}).code == 2);
  CHECK(call({"turns", "--system", sys(0.3)}).code == 2);
}

TEST_CASE("band-scan command") {
  auto r = call({"--precision", "17", "band-scan", "--cell", "1:0.5", "--Emin", "0.1", "--Emax",
                 "3", "--samples", "60"});
  REQUIRE(r.code == 0);
  const auto recs = records(r.out);
  std::vector<double> edges;
  for (const auto& rec : recs) {
    if (rec["command"] == "band_edge") {
      edges.push_back(rec["E"].get<double>());
      continue;
    }
    const double e = rec["E"].get<double>();
    if (e < 0.999) CHECK(rec["status"] == "forbidden");
    if (e > 1.001) CHECK(rec["status"] == "allowed");
  }
  REQUIRE(edges.size() == 1);
  CHECK(std::abs(edges[0] - 1.0) < 1e-8);

  r = call({"band-scan", "--cell", "0:1", "--Emin", "0.5", "--Emax", "9", "--samples", "40"});
  for (const auto& rec : records(r.out)) {
    CHECK(rec["command"] == "band_scan");
    CHECK(rec["status"] == "allowed");
  }

  const std::vector<std::string> kp = {"band-scan", "--cell", "4:0.5;0:1", "--Emin", "0.1",
                                       "--Emax", "20", "--samples", "300"};
  const Result one = call(concat({"--workers", "1"}, kp));
  const Result four = call(concat({"--workers", "4"}, kp));
  const Result autod = call(kp);
  CHECK(one.out == four.out);
  CHECK(one.out == autod.out);

  CHECK(call({"band-scan", "--cell", "1:1", "--Emin", "2", "--Emax", "1"}).code == 2);
  CHECK(call({"--workers", "0", "band-scan", "--cell", "1:1", "--Emin", "1", "--Emax", "2"}).code ==
        2);
}

TEST_CASE("oracle-compare command") {
  auto r = call({"oracle-compare", "--cell", "1:2", "--E", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(records(r.out).at(0)["max_deviation"].get<double>() < 1e-6);

  const std::string path = "test_cli_zero_potential.txt";
  {
    std::ofstream f(path);
    f << "# V = 0\n";
    for (int i = 0; i <= 2000; ++i) f << i * 0.001 << " 0\n";
  }
  r = call({"oracle-compare", "--potential", path, "--E", "2"});
  REQUIRE(r.code == 0);
  CHECK(records(r.out).at(0)["max_deviation"].get<double>() < 1e-8);
  std::remove(path.c_str());

  r = call({"oracle-compare", "--cell", "1:2", "--E", "0.5", "--points", "3"});
  CHECK(r.code == 3);
  CHECK(Json::parse(r.err)["error"]["kind"] == "degeneracy");
  CHECK(call({"oracle-compare", "--E", "1"}).code == 2);
}

TEST_CASE("csv output and precision") {
  auto r = call({"--format", "csv", "band-scan", "--cell", "1:0.5", "--Emin", "0.5", "--Emax",
                 "1.5", "--samples", "3"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "command,E,half_trace,status,residuals_det,residuals_flux");
  CHECK(rows[4] == "command,index,E,half_trace,residuals_det,residuals_flux");

  r = call({"--format", "csv", "barrier", "--E", "0.5", "--V0", "1", "--L", "2"});
  CHECK(lines(r.out).at(0).find("r_re,r_im,t_re,t_im") != std::string::npos);

  r = call({"--precision", "6", "barrier", "--E", "0.5", "--V0", "1", "--L", "2"});
  CHECK(records(r.out).at(0)["matrix"]["alpha"]["re"].get<double>() == 2.17818);
  CHECK(call({"--precision", "18", "barrier", "--E", "1", "--V0", "1", "--L", "1"}).code == 2);
  CHECK(call({"--format", "xml", "barrier", "--E", "1", "--V0", "1", "--L", "1"}).code == 2);
}

TEST_CASE("usage errors and help") {
  CHECK(call({}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  const Result help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("band-scan") != std::string::npos);
  CHECK(call({"--hbar", "-1", "barrier", "--E", "1", "--V0", "1", "--L", "1"}).code == 2);
}

TEST_CASE("binary is deterministic across runs") {
  const std::string cmd = std::string(TMDISK_CLI_PATH) +
                          " --workers 3 band-scan --cell '4:0.5;0:1' --Emin 0.1 --Emax 20 "
                          "--samples 200 2>&1";
  auto capture = [&] {
    std::string text;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
    CHECK(pclose(pipe) == 0);
    return text;
  };
  const std::string first = capture();
  CHECK(!first.empty());
  CHECK(first == capture());

  FILE* pipe = popen((std::string(TMDISK_CLI_PATH) + " classify --r 0.5 --t 0.5 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
}
