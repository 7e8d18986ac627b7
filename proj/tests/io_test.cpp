#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "robsurf/io.hpp"
#include "robsurf/metrics.hpp"
#include "support/graphs.hpp"

using namespace robsurf;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

template <typename Fn>
std::size_t parse_error_line(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(EdgeList, Examples) {
  const Graph g = parse("a b\nb c");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.link_count(), 2u);
  EXPECT_EQ(g.label(0), "a");
  EXPECT_EQ(g.label(1), "b");
  EXPECT_EQ(g.label(2), "c");
  EXPECT_TRUE(g.has_link(0, 1));
  EXPECT_TRUE(g.has_link(1, 2));

  EXPECT_EQ(parse_error_line([] { parse("a b\nx x\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse("a b\nb a\n"); }), 2u);
}

TEST(EdgeList, CommentsBlankLinesAndWhitespace) {
  const Graph g = parse("# topology\n\n  n1\tn2  \r\n# trailing\nn2 n3\n   \n");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.link_count(), 2u);
}

TEST(EdgeList, MalformedLines) {
  EXPECT_EQ(parse_error_line([] { parse("a b\nc\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { parse("a b c\n"); }), 1u);
  EXPECT_THROW(load_edge_list("/nonexistent/file.txt"), IoError);
}

TEST(EdgeList, LineOrderDoesNotChangeMetrics) {
  const Graph g = robsurf::testing::preferential_attachment_graph(40, 2, 9);
  std::vector<std::string> lines;
  for (const Link& l : g.links())
    lines.push_back("v" + std::to_string(l.first) + " v" + std::to_string(l.second));
  std::string forward;
  for (const auto& l : lines) forward += l + "\n";
  std::shuffle(lines.begin(), lines.end(), std::mt19937_64(4));
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";

  const Graph a = parse(forward);
  const Graph b = parse(shuffled);
  ASSERT_EQ(a.node_count(), b.node_count());
  ASSERT_EQ(a.link_count(), b.link_count());
  const auto ta = metric_vector(a, ElementKind::link, a.node_count());
  const auto tb = metric_vector(b, ElementKind::link, b.node_count());
  for (std::size_t i = 0; i < ta.size(); ++i)
    EXPECT_NEAR(ta.values[i], tb.values[i], 1e-9 * std::max(1.0, ta.values[i])) << ta.names[i];
}

TEST(SurfaceCsv, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  Matrix omega(7, 13);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 13; ++j) omega(i, j) = u(rng) * std::pow(10.0, (int)(j % 5) - 2);
  omega(0, 0) = 1.0 / 3.0;
  omega(1, 1) = 0.0;
  const std::vector<int> percentages{1, 2, 3, 5, 8, 13, 21};

  std::stringstream buffer;
  write_surface_csv(buffer, omega, percentages);
  const auto table = read_surface_csv(buffer);
  EXPECT_EQ(table.percentages, percentages);
  EXPECT_TRUE(table.omega == omega);
}

TEST(SurfaceCsv, HeaderLayout) {
  std::ostringstream out;
  write_surface_csv(out, Matrix::from_rows({{1.0, 0.5}}), std::vector<int>{1});
  EXPECT_EQ(out.str(), "percent,1,2\n1,1,0.5\n");
}

TEST(Heatmap, SingleCellIsRed) {
  const std::string ppm = encode_ppm(Matrix(1, 1, 1.0), 1.0);
  EXPECT_EQ(ppm, std::string("P6 1 1 255\n") + std::string("\xff\x00\x00", 3));
}

TEST(Heatmap, AllZeroIsUniformBlue) {
  const std::string ppm = encode_ppm(Matrix(3, 4, 0.0), 0.0);
  const std::string header = "P6 4 3 255\n";
  ASSERT_EQ(ppm.size(), header.size() + 3 * 12);
  EXPECT_EQ(ppm.substr(0, header.size()), header);
  for (std::size_t i = header.size(); i < ppm.size(); i += 3) {
    EXPECT_EQ(static_cast<unsigned char>(ppm[i]), 0);
    EXPECT_EQ(static_cast<unsigned char>(ppm[i + 1]), 0);
    EXPECT_EQ(static_cast<unsigned char>(ppm[i + 2]), 255);
  }
}

TEST(Heatmap, SortedRowsRenderNonIncreasingRed) {
  const Matrix omega = Matrix::from_rows({{1.2, 0.9, 0.4, 0.0}, {0.8, 0.8, 0.1, -0.2}});
  const std::string ppm = encode_ppm(omega, 1.2);
  const std::size_t start = std::string("P6 4 2 255\n").size();
  for (std::size_t row = 0; row < 2; ++row)
    for (std::size_t col = 1; col < 4; ++col) {
      const auto prev = static_cast<unsigned char>(ppm[start + 3 * (row * 4 + col - 1)]);
      const auto cur = static_cast<unsigned char>(ppm[start + 3 * (row * 4 + col)]);
      EXPECT_GE(prev, cur);
    }
  EXPECT_EQ(heatmap_color(-0.2, 1.2), (std::array<std::uint8_t, 3>{0, 0, 255}));
  EXPECT_THROW(encode_ppm(Matrix(), 1.0), InputError);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
