#include <gtest/gtest.h>

#include <charconv>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "sbnmf/errors.hpp"
#include "sbnmf/text_io.hpp"

TEST(NetworkText, MinimalNetwork) {
  const sbn::SigmoidBeliefNetwork net = sbn::parse_network("SBN 1\nN 1\nH 0 0.0\n");
  EXPECT_EQ(net.size(), 1u);
  EXPECT_EQ(net.edge_count(), 0u);
  EXPECT_EQ(net.bias(0), 0.0);
}

TEST(NetworkText, RoundTripIsByteIdentical) {
  sbn::Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const sbn::SigmoidBeliefNetwork net = fixture::layered_2_4_6(rng);
    const std::string text = sbn::emit_network(net);
    const sbn::SigmoidBeliefNetwork back = sbn::parse_network(text);
    EXPECT_EQ(sbn::emit_network(back), text);
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      EXPECT_EQ(back.edges()[e].weight, net.edges()[e].weight);
    }
  }
}

TEST(NetworkText, CanonicalLayout) {
  const sbn::SigmoidBeliefNetwork net({0.5, -1.25}, {{1, 0, 0.1}});
  EXPECT_EQ(sbn::emit_network(net), "SBN 1\nN 2\nH 0 0.5\nH 1 -1.25\nJ 1 0 0.1\n");
}

TEST(NetworkText, RejectsMalformedInput) {
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 2\nH 0 0\nH 1 0\nJ 0 1 0.5\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 3\nH 0 0\nH 1 0\nH 2 0\nJ 2 1 1\nJ 1 0 1\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 2\nH 0 0\nH 1 0\nJ 1 0 1\nJ 1 0 2\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 2\nN 1\nH 0 0\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 1\nH 0 nan\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 1\nH 0 1e999\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 2\nH 0 0\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 1\nH 0  0\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_network("SBN 1\nN 1\nH 0 0\nJ 5 0 1\n"), sbn::ParseError);
}

TEST(NetworkText, ErrorNamesLine) {
  try {
    sbn::parse_network("SBN 1\nN 2\nH 0 0\nH 1 0\nJ 0 1 0.5\n");
    FAIL() << "expected a parse error";
  } catch (const sbn::ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(EvidenceText, RoundTrip) {
  const sbn::Evidence ev = sbn::parse_evidence("3 1\n0 0\n");
  EXPECT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev.value(3), 1);
  EXPECT_EQ(sbn::emit_evidence(ev), "0 0\n3 1\n");
  EXPECT_EQ(sbn::parse_evidence("").size(), 0u);
  EXPECT_THROW(sbn::parse_evidence("0 2\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_evidence("0 1\n0 0\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_evidence("-1 1\n"), sbn::ParseError);
}

TEST(DatasetText, SinglePixel) {
  const sbn::BitmapDataset d = sbn::parse_dataset("BITMAP 1\n1 1 1\n1\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.pattern(0)[0], 1);
}

TEST(DatasetText, RejectsShortRow) {
  std::string text = "BITMAP 1\n8 8 1\n" + std::string(63, '0') + "\n";
  EXPECT_THROW(sbn::parse_dataset(text), sbn::ParseError);
  text = "BITMAP 1\n8 8 1\n" + std::string(64, '0') + "\n";
  EXPECT_NO_THROW(sbn::parse_dataset(text));
}

TEST(DatasetText, RejectsBadContent) {
  EXPECT_THROW(sbn::parse_dataset("BITMAP 1\n1 2 1\n02\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_dataset("BITMAP 1\n1 2 2\n01\n"), sbn::ParseError);
  EXPECT_THROW(sbn::parse_dataset("BITMAP 1\n0 2 0\n"), sbn::ParseError);
}

TEST(DatasetText, RoundTrip) {
  sbn::BitmapDataset d(2, 3);
  d.add({1, 0, 1, 0, 0, 1});
  d.add({0, 0, 0, 1, 1, 1});
  const std::string text = sbn::emit_dataset(d);
  EXPECT_EQ(text, "BITMAP 1\n2 3 2\n101001\n000111\n");
  EXPECT_EQ(sbn::emit_dataset(sbn::parse_dataset(text)), text);
}

TEST(Dataset, ValidatesPatterns) {
  sbn::BitmapDataset d(2, 2);
  EXPECT_THROW(d.add({1, 0, 1}), sbn::InvalidArgument);
  EXPECT_THROW(d.add({1, 0, 1, 2}), sbn::InvalidArgument);
  EXPECT_THROW(sbn::BitmapDataset(0, 3), sbn::InvalidArgument);
}

TEST(RealFormat, ShortestRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0}) {
    const std::string s = sbn::format_real(v);
    double back = 1.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(sbn::format_real(0.5), "0.5");
}

TEST(Files, ReadWriteAndErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "sbnmf_text_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "net.sbn").string();
  sbn::write_text_file(path, "SBN 1\nN 1\nH 0 2\n");
  EXPECT_EQ(sbn::parse_network(sbn::read_text_file(path)).bias(0), 2.0);
  EXPECT_THROW(sbn::read_text_file((dir / "missing.sbn").string()), sbn::IoError);
  EXPECT_THROW(sbn::write_text_file((dir / "no" / "such" / "dir.sbn").string(), "x"), sbn::IoError);
  std::filesystem::remove_all(dir);
}
