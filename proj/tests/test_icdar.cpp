#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "quadwin/config.hpp"
#include "quadwin/icdar.hpp"

using namespace quadwin;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(QUADWIN_FIXTURES) / "icdar";

}  // namespace

TEST(IcdarLine, Basic) {
  const auto rec = parse_icdar_line("0,0,10,0,10,5,0,5,hello", 1);
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->quad.vertices(), (std::array<Point2, 4>{{{0, 0}, {10, 0}, {10, 5}, {0, 5}}}));
  EXPECT_EQ(rec->transcription, "hello");
  EXPECT_FALSE(rec->dont_care);
}

TEST(IcdarLine, DontCare) {
  const auto rec = parse_icdar_line("0,0,10,0,10,5,0,5,###", 1);
  ASSERT_TRUE(rec.has_value());
  EXPECT_TRUE(rec->dont_care);
}

TEST(IcdarLine, Malformed) {
  EXPECT_THROW(parse_icdar_line("a,b,...", 3), ParseError);
  EXPECT_THROW(parse_icdar_line("0,0,10,0,10,5,0", 3), ParseError);
  EXPECT_THROW(parse_icdar_line("0,0,10,0,10,5,0,x5,word", 3), ParseError);
  try {
    parse_icdar_line("0,0,1", 7);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
  }
}

TEST(IcdarLine, CommasStayInTranscription) {
  const auto rec = parse_icdar_line("0,0,10,0,10,5,0,5,a,b,c", 1);
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->transcription, "a,b,c");
}

TEST(IcdarLine, EightFieldsMeansEmptyTranscription) {
  const auto rec = parse_icdar_line("0,0,10,0,10,5,0,5", 1);
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->transcription, "");
}

TEST(IcdarLine, VertexOrderIsCanonicalized) {
  const auto a = parse_icdar_line("10,5,0,5,0,0,10,0,x", 1);
  const auto b = parse_icdar_line("0,0,10,0,10,5,0,5,x", 1);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->quad, b->quad);
}

TEST(IcdarLine, NonConvexIsSkipped) {
  // (2,2) lies inside the triangle of the other three points.
  EXPECT_FALSE(parse_icdar_line("0,0,10,0,0,10,2,2,dart", 1).has_value());
  EXPECT_FALSE(parse_icdar_line("0,0,5,0,10,0,0,5,flat", 1).has_value());
  // A crossed listing of four points in convex position is reordered, not rejected.
  EXPECT_TRUE(parse_icdar_line("0,0,10,5,10,0,0,5,crossed", 1).has_value());
}

TEST(IcdarStream, BomCrlfAndBlankLines) {
  std::istringstream is("\xEF\xBB\xBF" "0,0,10,0,10,5,0,5,one\r\n\r\n   \r\n20,0,30,0,30,5,20,5,###\r\n");
  const auto r = parse_icdar(is);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].transcription, "one");
  EXPECT_TRUE(r.records[1].dont_care);
  EXPECT_EQ(care_quads(r.records).size(), 1u);
}

TEST(IcdarStream, ErrorReportsLineNumber) {
  std::istringstream is("0,0,10,0,10,5,0,5,ok\nbad,line\n");
  try {
    parse_icdar(is);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(IcdarFixtures, ParseWithoutErrors) {
  const auto files = list_annotation_files(kFixtures);
  ASSERT_EQ(files.size(), 10u);
  std::size_t records = 0, dont_care = 0;
  for (const auto& f : files) {
    const auto r = parse_icdar_file(f);
    EXPECT_EQ(r.skipped_nonconvex, 0u) << f;
    records += r.records.size();
    for (const auto& rec : r.records) dont_care += rec.dont_care ? 1 : 0;
  }
  EXPECT_EQ(records, 37u);
  EXPECT_EQ(dont_care, 10u);
}

TEST(IcdarFixtures, SpecialTranscriptionsSurvive) {
  const auto r = parse_icdar_file(kFixtures / "gt_img_3.txt");
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.records[2].transcription, "Hello, world");
  EXPECT_EQ(r.records[3].transcription, "\"A,B,C\"");
  const auto r7 = parse_icdar_file(kFixtures / "gt_img_7.txt");
  EXPECT_EQ(r7.records[2].transcription, "\xC3\xA9t\xC3\xA9");
}

TEST(IcdarFixtures, RoundTripIsStable) {
  for (const auto& f : list_annotation_files(kFixtures)) {
    const auto first = parse_icdar_file(f);
    std::ostringstream os;
    write_icdar(os, first.records);
    std::istringstream is(os.str());
    const auto second = parse_icdar(is);
    ASSERT_EQ(second.records.size(), first.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i) {
      EXPECT_EQ(second.records[i].quad, first.records[i].quad);
      EXPECT_EQ(second.records[i].transcription, first.records[i].transcription);
      EXPECT_EQ(second.records[i].dont_care, first.records[i].dont_care);
    }
    std::ostringstream again;
    write_icdar(again, second.records);
    EXPECT_EQ(again.str(), os.str());
  }
}

TEST(CsvHelpers, FormatAndParse) {
  for (double v : {0.0, -1.5, 0.1, 1e-300, 123456.789, 1.0 / 3.0}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(parse_double(" +2.5 "), 2.5);
  EXPECT_FALSE(parse_double("2.5x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_FALSE(parse_double("inf").has_value());
}

TEST(PriorCsv, RejectsBadRows) {
  std::istringstream bad_header("nope\n");
  EXPECT_THROW(read_priors_csv(bad_header), ParseError);
  std::istringstream bad_family(std::string(kPriorCsvHeader) + "\n0,0,0,weird,0.1,1,0,0,1,0,1,1,0,1\n");
  EXPECT_THROW(read_priors_csv(bad_family), ParseError);
}

TEST(PriorConfig, ParsesGridsAndFractions) {
  std::istringstream is(
      "# two maps\n"
      "image_width = 640\n"
      "image_height = 480   # trailing comment\n"
      "clamp = true\n"
      "grid = map=4x3 scale=0.2 aspects=1,2,1/2\n"
      "grid = map=1x1 scale=0.9 aspects=1\n");
  const PriorConfig cfg = parse_prior_config(is);
  EXPECT_EQ(cfg.image_w, 640.0);
  EXPECT_EQ(cfg.image_h, 480.0);
  EXPECT_TRUE(cfg.clamp);
  ASSERT_EQ(cfg.grids.size(), 2u);
  EXPECT_EQ(cfg.grids[0].map_w, 4u);
  EXPECT_EQ(cfg.grids[0].map_h, 3u);
  EXPECT_EQ(cfg.grids[0].aspect_ratios, (std::vector<double>{1.0, 2.0, 0.5}));
  EXPECT_EQ(cfg.grids[1].image_w, 640.0);
}

TEST(PriorConfig, DefaultsWhenNoGrids) {
  std::istringstream is("image_width = 1280\nimage_height = 720\n");
  const PriorConfig cfg = parse_prior_config(is);
  EXPECT_EQ(cfg.grids.size(), 6u);
  EXPECT_EQ(cfg.grids[0].map_w, 160u);
  EXPECT_EQ(cfg.grids[0].map_h, 90u);
}

TEST(PriorConfig, Errors) {
  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(parse_prior_config(unknown), ParseError);
  std::istringstream no_eq("grid\n");
  EXPECT_THROW(parse_prior_config(no_eq), ParseError);
  std::istringstream bad_grid("grid = map=4 scale=0.2\n");
  EXPECT_THROW(parse_prior_config(bad_grid), ParseError);
  std::istringstream zero_den("grid = map=2x2 scale=0.2 aspects=1/0\n");
  EXPECT_THROW(parse_prior_config(zero_den), ParseError);
}

TEST(SynthConfig, ParsesAndPresets) {
  std::istringstream is("count = 25\nrotation_min_deg = 20\nrotation_max_deg = 45\nrandom_sign = yes\nseed = 7\n");
  const SynthSpec s = parse_synth_spec(is);
  EXPECT_EQ(s.count, 25u);
  EXPECT_TRUE(s.random_sign);
  EXPECT_EQ(s.seed, 7u);
  ASSERT_TRUE(synth_preset("oriented").has_value());
  EXPECT_EQ(synth_preset("oriented")->rotation_min_deg, 20.0);
  EXPECT_FALSE(synth_preset("nope").has_value());
  std::istringstream bad("aspect_min = 5\naspect_max = 2\n");
  EXPECT_THROW(parse_synth_spec(bad), ParseError);
}
