#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace hiermod;

TEST(Csv, ParseSkipsCommentsAndBlanks) {
    const auto doc = csv::parse("# note\n\n a , b \n1,2\n\n# x\n3, 4\n", "t.csv");
    EXPECT_EQ(doc.header, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(doc.header_line, 3u);
    ASSERT_EQ(doc.rows.size(), 2u);
    EXPECT_EQ(doc.rows[1].line, 7u);
    EXPECT_EQ(doc.rows[1].fields[1], "4");
}

TEST(Csv, Errors) {
    EXPECT_THROW(csv::parse("", "t"), ParseError);
    EXPECT_THROW(csv::parse("# only\n", "t"), ParseError);
    try {
        csv::parse("a,b\n1,2\n1\n", "t.csv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    const auto doc = csv::parse("x,y\n", "t");
    EXPECT_THROW(csv::expect_header(doc, {"x", "z"}), ParseError);
    EXPECT_NO_THROW(csv::expect_header(doc, {"x", "y"}));
}

TEST(Csv, Numbers) {
    EXPECT_DOUBLE_EQ(csv::to_double("-2.35", "t", 1), -2.35);
    EXPECT_DOUBLE_EQ(csv::to_double("+1e3", "t", 1), 1000.0);
    EXPECT_THROW(csv::to_double("", "t", 1), ParseError);
    EXPECT_THROW(csv::to_double("1.0x", "t", 1), ParseError);
    EXPECT_EQ(csv::to_long("42", "t", 1), 42);
    EXPECT_THROW(csv::to_long("4.2", "t", 1), ParseError);
}

TEST(Csv, NumRoundTrips) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        EXPECT_EQ(csv::to_double(csv::num(x), "t", 1), x);
    }
    EXPECT_EQ(csv::num(0.5), "0.5");
    EXPECT_EQ(csv::num(13.13), "13.13");
}

TEST(Csv, AtomicWriteAndRead) {
    const auto dir = std::filesystem::temp_directory_path() / "hiermod_csv_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "f.csv";
    csv::write_file_atomic(path, "a\n1\n");
    EXPECT_EQ(csv::read_file(path), "a\n1\n");
    csv::write_file_atomic(path, "b\n");
    EXPECT_EQ(csv::read_file(path), "b\n");
    EXPECT_THROW(csv::read_file(dir / "missing.csv"), std::exception);
    std::filesystem::remove_all(dir);
}
