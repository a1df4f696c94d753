#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "qspec/io.hpp"

using namespace qspec;

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(-0.7071067811865476), "-0.7071067811865476");
  EXPECT_EQ(io::format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(io::format_double(0.0), "0");
  EXPECT_EQ(io::format_double(NAN), "nan");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e300, 1e300);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng) * std::pow(10.0, -static_cast<int>(rng() % 600));
    const auto s = io::format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v);
    std::string mantissa = s.substr(0, s.find('e'));
    std::erase_if(mantissa, [](char c) { return c == '-' || c == '.'; });
    const auto first = mantissa.find_first_not_of('0');
    const auto last = mantissa.find_last_not_of('0');
    const std::size_t digits = first == std::string::npos ? 0 : last - first + 1;
    EXPECT_LE(digits, 17u);
  }
}

TEST(Csv, QuotingAndRows) {
  EXPECT_EQ(io::csv_field("plain"), "plain");
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  io::write_csv(os, {"x", "y"}, {{1.5, -2.0}, {0.25, 1e-300}});
  EXPECT_EQ(os.str(), "x,y\r\n1.5,-2\r\n0.25,1e-300\r\n");
}

TEST(Csv, MomentRows) {
  std::ostringstream os;
  io::write_csv_row(os, io::moment_header());
  io::write_moment_row(os, moment_report(0.0, 4), "");
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\r')), "lambda,d,expectation,var_truncated,var_full,flags");
  EXPECT_NE(s.find("\r\n0,"), std::string::npos);
}

TEST(Json, Certificates) {
  const auto c = find_near_eigenvalue({1.0 / std::sqrt(2.0), 1e-12, 0});
  const auto j = io::to_json(c);
  EXPECT_EQ(j["cap"], 1);
  EXPECT_TRUE(j.contains("distance"));
  EXPECT_EQ(j["mode"], "quadrature");
  EXPECT_EQ(j["eigenvalue"].get<double>(), c.eigenvalue);
}

TEST(Json, SpectrumAndRoots) {
  const auto j = io::to_json(diagonalize(build(1)));
  EXPECT_EQ(j["cap"], 1);
  EXPECT_EQ(j["eigenvalues"].dump(), "[-0.7071067811865476,0.7071067811865476]");
  const auto z = io::to_json(complex_zeros(1));
  EXPECT_EQ(z["roots"].size(), 2u);
  EXPECT_EQ(z["roots"][0].size(), 2u);
  std::ostringstream os;
  io::write_roots_csv(os, complex_zeros(1));
  EXPECT_EQ(os.str().substr(0, 7), "re,im\r\n");
}
