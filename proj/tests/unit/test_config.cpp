#include <gtest/gtest.h>

#include "config.hpp"
#include "perclab/error.hpp"

namespace {

using perclab::cli::Config;

TEST(Config, ParsesKeysValuesAndComments) {
  const auto c = Config::parse("# header\ngraph.family = torus   # trailing\n\ngraph.dims = 4, 5\nsampling.master_seed=0x10\n");
  EXPECT_EQ(c.get_string("graph.family"), "torus");
  EXPECT_EQ(c.get_ints("graph.dims"), (std::vector<std::int64_t>{4, 5}));
  EXPECT_EQ(c.get_u64("sampling.master_seed"), 16u);
}

TEST(Config, RejectsDuplicateKeys) {
  EXPECT_THROW(Config::parse("a.b = 1\na.b = 2\n"), perclab::ParseError);
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(Config::parse("no equals sign\n"), perclab::ParseError);
  EXPECT_THROW(Config::parse("a.b.c = 1\n"), perclab::ParseError);
  EXPECT_THROW(Config::parse("Upper = 1\n"), perclab::ParseError);
}

TEST(Config, MissingKeyWithoutFallbackIsParseError) {
  const auto c = Config::parse("a.b = 1\n");
  EXPECT_THROW(c.get_string("a.c"), perclab::ParseError);
  EXPECT_EQ(c.get_int("a.c", 7), 7);
}

TEST(Config, BadNumbersAreParseErrors) {
  const auto c = Config::parse("x.d = 1.5e\nx.i = 3.0\nx.list = 1,,2\n");
  EXPECT_THROW(c.get_double("x.d"), perclab::ParseError);
  EXPECT_THROW(c.get_int("x.i"), perclab::ParseError);
  EXPECT_THROW(c.get_doubles("x.list"), perclab::ParseError);
}

TEST(Config, TracksUnusedKeys) {
  const auto c = Config::parse("a.x = 1\na.y = 2\n");
  c.get_int("a.x");
  EXPECT_EQ(c.unused_keys(), std::vector<std::string>{"a.y"});
  EXPECT_TRUE(c.was_read("a.x"));
  c.reset_reads();
  EXPECT_FALSE(c.was_read("a.x"));
}

TEST(Config, BooleansAcceptCommonSpellings) {
  const auto c = Config::parse("s.a = true\ns.b = false\ns.c = maybe\n");
  EXPECT_TRUE(c.get_bool("s.a", false));
  EXPECT_FALSE(c.get_bool("s.b", true));
  EXPECT_THROW(c.get_bool("s.c", true), perclab::ParseError);
}

}  // namespace
