#include <gtest/gtest.h>

#include <sstream>

#include "tqent/scan.hpp"

using namespace tqent;

namespace {

std::vector<double> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  const auto idx = static_cast<std::size_t>(it - t.header.begin());
  std::vector<double> out;
  for (const auto& r : t.rows) out.push_back(std::stod(r.at(idx)));
  return out;
}

}  // namespace

TEST(ParseScalar, NumbersAndPi) {
  EXPECT_EQ(parse_scalar("0.25"), 0.25);
  EXPECT_NEAR(parse_scalar("pi"), std::numbers::pi, 1e-15);
  EXPECT_NEAR(parse_scalar("π/4"), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(parse_scalar("3pi/2"), 1.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(parse_scalar("2*PI"), 2 * std::numbers::pi, 1e-15);
  EXPECT_THROW(parse_scalar("abc"), InvalidArgument);
  EXPECT_THROW(parse_scalar(""), InvalidArgument);
  EXPECT_THROW(parse_scalar("pi/0"), InvalidArgument);
}

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("2"), (std::vector<double>{2.0}));
  EXPECT_EQ(parse_range("1,2.5,3"), (std::vector<double>{1.0, 2.5, 3.0}));
  const auto q = parse_range("0.7:4.3:0.01");
  EXPECT_EQ(q.size(), 361u);
  EXPECT_EQ(q.front(), 0.7);
  EXPECT_EQ(q.back(), 4.3);
  EXPECT_NE(std::find(q.begin(), q.end(), 1.0), q.end());
  const auto theta = parse_range("0:π:64");
  EXPECT_EQ(theta.size(), 65u);
  EXPECT_NEAR(theta.back(), std::numbers::pi, 1e-11);
  EXPECT_EQ(parse_range("0:1:0.3").back(), 0.9);  // never overshoots hi
  EXPECT_THROW(parse_range("1:0:0.1"), InvalidArgument);
  EXPECT_THROW(parse_range("0:1:0"), InvalidArgument);
  EXPECT_THROW(parse_range("0:1e9:0.0001"), InvalidArgument);
}

TEST(NamedState, Catalog) {
  EXPECT_EQ(named_state("w:3").dims(), (Dims{2, 2, 2}));
  EXPECT_EQ(named_state("ghz:4").dims(), (Dims{2, 2, 2, 2}));
  EXPECT_EQ(named_state("example3:0.785").dims(), (Dims{4, 2, 2}));
  EXPECT_EQ(named_state("example4").dims(), (Dims{3, 3, 3}));
  EXPECT_EQ(named_state("example5").dims(), (Dims{3, 2, 2}));
  EXPECT_EQ(named_state("gw:pi/2,pi").dims(), (Dims{2, 2, 2}));
  EXPECT_EQ(named_state("haar:3:5")[0], named_state("haar:3:5")[0]);
  EXPECT_NE(named_state("haar:3:5")[0], named_state("haar:3:6")[0]);
  EXPECT_THROW(named_state("w"), InvalidArgument);
  EXPECT_THROW(named_state("w:1.5"), InvalidArgument);
  EXPECT_THROW(named_state("bell:2"), InvalidArgument);
  EXPECT_THROW(named_state("haar:9"), InvalidArgument);
  EXPECT_THROW(named_state("nonsense"), InvalidArgument);
}

TEST(RunScan, WIndicatorPositive) {
  ScanRequest req;
  req.subject = "w-indicator:3";
  req.q = parse_range("0.7:4.3:0.05");
  const Table t = run_scan(req);
  EXPECT_EQ(t.header, (std::vector<std::string>{"n", "q", "tau"}));
  EXPECT_EQ(t.rows.size(), req.q.size());
  for (double v : column(t, "tau")) EXPECT_GT(v, 0.0);
}

TEST(RunScan, AntisymmetricSignChangeBracketsRoot) {
  ScanRequest req;
  req.subject = "example4";
  req.q = parse_range("0.7:4.3:0.01");
  const Table t = run_scan(req);
  const auto q = column(t, "q");
  const auto r = column(t, "residual");
  std::size_t changes = 0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if ((r[i - 1] > 0) != (r[i] > 0)) {
      ++changes;
      EXPECT_LE(q[i - 1], 1.619);
      EXPECT_GE(q[i], 1.619);
    }
  }
  EXPECT_EQ(changes, 1u);
}

TEST(RunScan, GeneralizedWGrid) {
  ScanRequest req;
  req.subject = "generalized-w";
  req.q = {2.0};
  req.theta = parse_range("0:π:8");
  req.phi = parse_range("0:2π:8");
  const Table t = run_scan(req);
  EXPECT_EQ(t.rows.size(), 81u);
  const auto theta = column(t, "theta");
  const auto phi = column(t, "phi");
  const auto tau = column(t, "tau");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    EXPECT_GE(tau[i], -1e-8);
    if (std::abs(theta[i] - std::numbers::pi / 2) < 1e-9 && phi[i] > 1.0 &&
        std::abs(std::remainder(phi[i], std::numbers::pi / 2)) < 1e-9) {
      EXPECT_LE(std::abs(tau[i]), 1e-8) << "phi=" << phi[i];
    }
  }
}

TEST(RunScan, CombinedExamplesAndDerivatives) {
  ScanRequest req;
  req.subject = "example4,example5";
  req.q = {1.5, 2.0};
  const Table t = run_scan(req);
  EXPECT_EQ(t.header.front(), "subject");
  EXPECT_EQ(t.rows.size(), 4u);
  req.subject = "lq";
  req.x = {0.1, 0.5};
  EXPECT_EQ(run_scan(req).rows.size(), 4u);
  req.subject = "d2fc-zero";
  req.x = {0.2, 0.9};
  const Table z = run_scan(req);
  EXPECT_EQ(z.header, (std::vector<std::string>{"c", "q_low", "q_high"}));
  EXPECT_NEAR(d2_fq_wrt_C(std::stod(z.rows[1][1]), 0.9), 0.0, 1e-9);
  EXPECT_NEAR(d2_fq_wrt_C(std::stod(z.rows[1][2]), 0.9), 0.0, 1e-9);
}

TEST(RunScan, Errors) {
  ScanRequest req;
  req.subject = "nope";
  EXPECT_THROW(run_scan(req), InvalidArgument);
  req.subject = "w-indicator";
  EXPECT_THROW(run_scan(req), InvalidArgument);
}

TEST(Table, CsvLayout) {
  Table t;
  t.header = {"a", "b"};
  t.add({1.0 / 3.0, -0.0});
  std::ostringstream os;
  t.write_csv(os);
  EXPECT_EQ(os.str(), "a,b\n0.333333333333,0\n");
}
