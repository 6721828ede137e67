#include <gtest/gtest.h>

#include <sstream>

#include "cmtheta/io.hpp"
#include "cmtheta/random.hpp"

using namespace cmtheta;

TEST(KeyValues, ParsesCommentsAndSeparators) {
  std::istringstream in("# header\nr = 2\n  rho: 1/3   # trailing\n\nout=report.json\n");
  auto kv = parse_key_values(in);
  EXPECT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("r"), "2");
  EXPECT_EQ(kv.at("rho"), "1/3");
  EXPECT_EQ(kv.at("out"), "report.json");
}

TEST(KeyValues, RejectsMalformedLines) {
  std::istringstream no_sep("r 2\n"), no_key(" = 2\n");
  EXPECT_THROW(parse_key_values(no_sep), ConfigError);
  EXPECT_THROW(parse_key_values(no_key), ConfigError);
  EXPECT_THROW(load_key_values("/nonexistent/config.txt"), ConfigError);
}

TEST(KeyValues, LatticeExactAndFloating) {
  EXPECT_TRUE(lattice_from_config({}).is_exact());
  std::map<std::string, std::string> kv{
      {"omega1_re", "0"}, {"omega1_im", "1"}, {"omega2_re", "1"}, {"omega2_im", "0"}, {"beta0_im", "1/2"}};
  Lattice exact = lattice_from_config(kv);
  EXPECT_TRUE(exact.is_exact());
  EXPECT_DOUBLE_EQ(exact.b(), 0.5);
  kv["omega1_im"] = "1e0";
  Lattice floating = lattice_from_config(kv);
  EXPECT_FALSE(floating.is_exact());
  EXPECT_EQ(floating.omega1(), cplx(0, 1));
  kv.erase("beta0_im");
  EXPECT_THROW(lattice_from_config(kv), ConfigError);
}

TEST(Json, LatticeRoundTrip) {
  for (const Lattice& lat : {Lattice::default_cm(), Lattice(cplx(0, 2), cplx(1, 0), 0.5)}) {
    Lattice back = lattice_from_json(json::parse(to_json(lat).dump()));
    EXPECT_EQ(back.omega1(), lat.omega1());
    EXPECT_EQ(back.omega2(), lat.omega2());
    EXPECT_EQ(back.b(), lat.b());
    EXPECT_EQ(back.is_exact(), lat.is_exact());
  }
}

TEST(Json, SectionAndSeriesRoundTrip) {
  Rng rng(51);
  FJSeries s = random_series(FJSide::X, Lattice::default_cm(), 3, rng, 3, {Rational(1, 3), Rational(1, 5)});
  FJSeries back = fj_series_from_json(json::parse(to_json(s).dump()));
  EXPECT_EQ(back.side, FJSide::X);
  ASSERT_EQ(back.terms.size(), 3u);
  for (const auto& [r, g] : s.terms) {
    EXPECT_TRUE(back.terms.at(r).bundle().same_as(g.bundle()));
    EXPECT_EQ(back.terms.at(r).coeffs(), g.coeffs());
  }
  cplx x(0.4, 0.2), y(0.1, 0.3);
  EXPECT_EQ(evaluate(back, x, y), evaluate(s, x, y));
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(cplx_from_json(json::parse("[1]")), ParseError);
  json b = to_json(LineBundle(Lattice::default_cm(), 1));
  b["tag"] = "F";
  EXPECT_THROW(bundle_from_json(b), ParseError);
  json f = json::parse(R"({"p": ["0", "0", "1"], "L": ["0", "0", "1"]})");
  EXPECT_THROW(flag_from_json(f), ParseError);
  json s = json::parse(R"({"side": "Z", "lattice": {}, "terms": []})");
  EXPECT_THROW(fj_series_from_json(s), ParseError);
}

TEST(Json, ExactBoundaryData) {
  FlagP2 f = FlagP2::make({GR(3), GR(1, 1), GR(1)}, {GR(0), GR(1), GR(-1, -1)});
  FlagP2 back = flag_from_json(json::parse(to_json(f).dump()));
  EXPECT_EQ(back.p, f.p);
  EXPECT_EQ(back.L, f.L);
  NilpotentElement n{GR(Rational(1, 2), Rational(-3)), GR(Rational(0), Rational(7, 4))};
  NilpotentElement nb = nilpotent_from_json(json::parse(to_json(n).dump()));
  EXPECT_EQ(nb.alpha, n.alpha);
  EXPECT_EQ(nb.beta, n.beta);
}

TEST(Csv, MatrixLayout) {
  Eigen::MatrixXcd m(2, 2);
  m << cplx(1, 0), cplx(0, -2), cplx(0.5, 0.25), cplx(3, 4);
  std::string csv = to_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,j,re,im");
  EXPECT_NE(csv.find("0,1,0,-2\n"), std::string::npos);
  EXPECT_NE(csv.find("1,0,0.5,0.25\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
