#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cfks/io.hpp"
#include "cfks/runner.hpp"
#include "helpers.hpp"

using namespace cfks;
using testutil::kPi;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips seeded doubles bit-exactly") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    double mant = detail::uniform_pm1(rng);
    int expo = static_cast<int>(rng() % 613) - 306;
    double v = std::ldexp(mant, expo);
    std::string s = format_double(v);
    CHECK(parse_double(s) == v);
  }
  CHECK(parse_double(format_double(0.0)) == 0.0);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("format_from_log covers both representable and astronomical values") {
  CHECK(parse_double(format_from_log(0.0)) == 1.0);
  CHECK(parse_double(format_from_log(std::log(2.5))) == Catch::Approx(2.5).epsilon(1e-15));
  // ln = 5.6e4: far beyond double range; expect mantissa e exponent form
  std::string big = format_from_log(56000.0);
  auto epos = big.find('e');
  REQUIRE(epos != std::string::npos);
  std::string expo_str = big.substr(epos + 1);
  if (!expo_str.empty() && expo_str[0] == '+') expo_str.erase(0, 1);
  double expo = parse_double(expo_str);
  CHECK(expo == Catch::Approx(std::floor(56000.0 / std::log(10.0))));
  double mant = parse_double(big.substr(0, epos));
  CHECK(mant >= 1.0);
  CHECK(mant < 10.0);
  // symmetric underflow side
  std::string tiny = format_from_log(-56000.0);
  CHECK(tiny.find("e-") != std::string::npos);
}

TEST_CASE("series CSV: header, empty report, bit-exact round trip") {
  RunReport rep;
  CHECK(series_csv_text(rep) == std::string(kSeriesHeader) + "\n");

  ReportRow r;
  r.t = 0.1;
  r.mean = 1.0 / 3.0;
  r.l2_dev = 1.2345678901234567e-5;
  r.sup_dev = 7.0;
  r.h_half = 1e-300;
  r.grad_sup = 3.14159;
  r.dt = 0.001;
  r.cert_margin = std::numeric_limits<double>::quiet_NaN();
  r.poincare_ok = true;
  r.agmon_ratio = 0.9999999999999999;
  rep.rows.push_back(r);
  ReportRow r2 = r;
  r2.t = 0.2;
  r2.poincare_ok = false;
  rep.rows.push_back(r2);

  std::string text = series_csv_text(rep);
  std::vector<ReportRow> rows = parse_series_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].t == r.t);
  CHECK(rows[0].mean == r.mean);
  CHECK(rows[0].l2_dev == r.l2_dev);
  CHECK(rows[0].h_half == r.h_half);
  CHECK(std::isnan(rows[0].cert_margin));
  CHECK(rows[0].poincare_ok);
  CHECK(rows[0].agmon_ratio == r.agmon_ratio);
  CHECK_FALSE(rows[1].poincare_ok);

  SECTION("file writer emits the same bytes") {
    std::string path = temp_path("cfks_series_test.csv");
    write_series(rep, path);
    CHECK(slurp(path) == text);
    std::remove(path.c_str());
  }
}

TEST_CASE("snapshot JSON shape") {
  Grid g = make_grid(8, kPi);
  State st{constant_field(g, 2.0), 0.5};
  std::string text = snapshot_json_text(st);
  CHECK(text.find("\"t\": 0.5") != std::string::npos);
  CHECK(text.find("\"n\": 8") != std::string::npos);
  CHECK(text.find("\"values\": [2, 2, 2, 2, 2, 2, 2, 2]") != std::string::npos);
}

TEST_CASE("certificate JSON carries the out-of-range parameters as numbers") {
  Grid g = make_grid(64, kPi);
  Field z = make_field(g, [](double x) { return 50.0 * std::sin(x); });
  ModulusCertificate cert = build_certificate(z, std::exp(2.5));
  std::string text = certificate_json_text(cert);
  CHECK(text.find("\"K\": ") != std::string::npos);
  CHECK(text.find("\"B\": ") != std::string::npos);
  CHECK(text.find("inf") == std::string::npos);
  CHECK(text.find("nan") == std::string::npos);
  // B is beyond double range: expect a positive astronomical exponent
  auto bpos = text.find("\"B\": ");
  auto epos = text.find("e+", bpos);
  REQUIRE(epos != std::string::npos);
  long expo = std::stol(text.substr(epos + 2, 8));
  CHECK(expo > 10000);
}

TEST_CASE("config parsing: defaults, echo, and errors") {
  RunConfig c = parse_config(
      "# minimal\n"
      "model = burgers\n"
      "alpha_diff = 1.0\n"
      "t_end = 2.0\n");
  CHECK(c.n == 256);
  CHECK(c.half_length == Catch::Approx(kPi));
  CHECK(c.cfl == 0.4);
  CHECK(c.dt_min == 1e-9);
  CHECK(c.monitor_cadence == 0.1);
  CHECK(c.initial == "cosine");
  REQUIRE(c.echo.size() == 3);
  CHECK(c.echo[0] == std::pair<std::string, std::string>{"model", "burgers"});

  SECTION("errors name the offending key") {
    auto fails_with = [](const std::string& text, const std::string& key) {
      try {
        parse_config(text);
        FAIL("expected a config error");
      } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(key) != std::string::npos);
      }
    };
    fails_with("model = burgers\nalpha_diff = 2.5\nt_end = 1\n", "alpha_diff");
    fails_with("model = burgers\nalpha_diff = 1\nt_end = 1\nwavelength = 3\n", "wavelength");
    fails_with("model = burgers\nalpha_diff = 1\nt_end = 1\nn = abc\n", "n");
    fails_with("model = burgers\nalpha_diff = 1\nt_end = 1\nn = 13\n", "n");
    fails_with("model = elephant\nalpha_diff = 1\nt_end = 1\n", "model");
    fails_with("alpha_diff = 1\nt_end = 1\n", "model");
    fails_with("model = burgers\nalpha_diff = 1\nt_end = 1\ncertify = maybe\n", "certify");
  }

  SECTION("full config round-trips through the echo") {
    std::string text =
        "model = keller_segel\n"
        "alpha_diff = 1\n"
        "chi = 1\n"
        "mass = 0.5\n"
        "n = 64\n"
        "t_end = 1.5\n"
        "initial = cosine\n"
        "amplitude = 2\n"
        "mode = 1\n"
        "sweep_alphas = 0.5, 1.0\n"
        "sweep_amplitudes = 5, 50\n";
    RunConfig full = parse_config(text);
    REQUIRE(full.sweep_alphas.size() == 2);
    REQUIRE(full.sweep_amplitudes.size() == 2);
    // echo preserves keys and raw values in file order
    std::string reconstructed;
    for (auto& [k, v] : full.echo) reconstructed += k + " = " + v + "\n";
    RunConfig again = parse_config(reconstructed);
    CHECK(again.echo == full.echo);
  }
}

TEST_CASE("sweep CSV layout") {
  std::vector<SweepCell> cells(2);
  cells[0] = {0.5, 50.0, CellClass::Blowup, 12345.6, 0.03};
  cells[1] = {1.0, 50.0, CellClass::Regular, 9000.0, 5.0};
  std::string text = sweep_csv_text(cells);
  CHECK(text.rfind("alpha_diff,amplitude,classification,max_grad,t_terminal\n", 0) == 0);
  CHECK(text.find("0.5,50,BLOWUP,12345.6,0.03") != std::string::npos);
  CHECK(text.find("1,50,REGULAR,9000,5") != std::string::npos);
}

TEST_CASE("plot SVG emits polylines for positive traces") {
  RunReport rep;
  for (int i = 0; i <= 10; ++i) {
    ReportRow r;
    r.t = 0.1 * i;
    r.l2_dev = std::exp(-0.5 * r.t);
    r.sup_dev = 2.0 * std::exp(-0.5 * r.t);
    r.h_half = r.l2_dev;
    r.grad_sup = 1.0;
    rep.rows.push_back(r);
  }
  std::string svg = plot_svg_text(rep);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("simulate runner produces a deterministic series file") {
  std::string path1 = temp_path("cfks_det_a.csv");
  std::string path2 = temp_path("cfks_det_b.csv");
  std::string conf =
      "model = burgers\n"
      "alpha_diff = 1\n"
      "chi = 1\n"
      "mass = 0.3\n"
      "n = 64\n"
      "t_end = 0.5\n"
      "initial = random\n"
      "seed = 12\n"
      "band_limit = 12\n"
      "amplitude = 1.5\n";
  RunConfig c1 = parse_config(conf + "series_csv = " + path1 + "\n");
  RunConfig c2 = parse_config(conf + "series_csv = " + path2 + "\n");
  std::ostringstream sink;
  REQUIRE(run_simulate(c1, sink) == 0);
  REQUIRE(run_simulate(c2, sink) == 0);
  CHECK(slurp(path1) == slurp(path2));
  std::remove(path1.c_str());
  std::remove(path2.c_str());
}
