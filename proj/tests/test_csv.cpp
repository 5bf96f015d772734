#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "gasdetect/csv.hpp"
#include "gasdetect/error.hpp"

using namespace gasdetect;

TEST(SamplesCsv, ReadsWithAndWithoutHeader) {
  std::istringstream with("node_id,t,value\n0,0,100.5\n3,1.5,-2\n");
  std::istringstream without("0,0,100.5\r\n\n3, 1.5 ,-2\n");
  const std::vector<Sample> want{{0, 0.0, 100.5}, {3, 1.5, -2.0}};
  EXPECT_EQ(read_samples_csv(with), want);
  EXPECT_EQ(read_samples_csv(without), want);
}

TEST(SamplesCsv, RoundTripIsBitExact) {
  std::vector<Sample> s{{0, 0.1, 0.1 + 0.2}, {11, 1e-7, 123456.789012345}, {2, 3, std::nextafter(1.0, 2.0)}};
  std::stringstream io;
  write_samples_csv(io, s);
  EXPECT_EQ(read_samples_csv(io), s);
}

TEST(SamplesCsv, ErrorsNameTheLine) {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_samples_csv(in, "log.csv");
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(error_of("node_id,t,value\n0,0,1\n0,1\n"), "log.csv:3: expected 3 fields node_id,t,value");
  EXPECT_NE(error_of("-1,0,1\n").find("log.csv:1:"), std::string::npos);
  EXPECT_NE(error_of("0,-1,1\n").find("log.csv:1:"), std::string::npos);
  EXPECT_NE(error_of("0,0,nan\n").find("value"), std::string::npos);
  EXPECT_NE(error_of("0,0,inf\n").find("value"), std::string::npos);
  EXPECT_NE(error_of("0,0,1x\n").find("value"), std::string::npos);
  EXPECT_NE(error_of("x,0,1\n").find("log.csv:1:"), std::string::npos);
}

TEST(SamplesCsv, MissingFile) {
  EXPECT_THROW(read_samples_csv(std::filesystem::path("/nonexistent/raw.csv")), DataError);
}

TEST(ColumnCsv, OptionalHeader) {
  std::istringstream a("value\n0\n1\n0\n");
  std::istringstream b("0\n0.5\n\n2\n");
  EXPECT_EQ(read_column_csv(a), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(read_column_csv(b), (std::vector<double>{0, 0.5, 2}));
  std::istringstream c("1\nvalue\n");
  EXPECT_THROW(read_column_csv(c), DataError);
}
