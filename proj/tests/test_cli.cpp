#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "pamber/cli.hpp"
#include "pamber/error.hpp"

using namespace pamber;
using namespace pamber::cli;

namespace {

// our CSV uses no quoting, so a parse is a plain split
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string reserialize(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("snr range parsing") {
  const SnrRange single = parse_snr_range("2.2");
  CHECK(single.values() == std::vector<double>{2.2});

  const SnrRange r = parse_snr_range("0:0.5:2");
  CHECK(r.values() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});

  const SnrRange neg = parse_snr_range("-5:0.1:-4.7");
  CHECK(neg.values().size() == 4);

  CHECK_THROWS_AS(parse_snr_range("abc"), Error);
  CHECK_THROWS_AS(parse_snr_range("0:0:5"), Error);
  CHECK_THROWS_AS(parse_snr_range("5:1:0"), Error);
  CHECK_THROWS_AS(parse_snr_range("1:2"), Error);
}

TEST_CASE("twelve significant digits") {
  CHECK(format_double(0.15865525393145707) == "0.158655253931");
  CHECK(format_double(5.3) == "5.3");
  CHECK(format_double(0.30000000000000004) == "0.3");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("classes command output") {
  const std::string csv = classes_command(4, Format::Csv);
  CHECK(csv ==
        "q,representative,type,members,a\n"
        "1,0011,ARE,3;12,2;2;0\n"
        "2,0110,RE,6;9,4;2;-2\n"
        "3,0101,ARE,5;10,6;-4;2\n");
  // byte-identical on repeat
  CHECK(classes_command(4, Format::Csv) == csv);

  const auto rows = parse_csv(classes_command(8, Format::Csv));
  CHECK(rows.size() == 24);  // header + 23 classes
  CHECK(classes_command(16, Format::Csv).size() > 3299u);

  const std::string json = classes_command(4, Format::Json);
  CHECK(json.find("\"schema_version\": \"1\"") != std::string::npos);
  CHECK(json.find("\"q\": 1") != std::string::npos);
  CHECK(json.find("\"representative\": \"0011\"") != std::string::npos);
}

TEST_CASE("csv round trip is byte identical") {
  for (const std::string& doc :
       {classes_command(8, Format::Csv),
        labelings_command(8, false, Format::Csv),
        thresholds_command(8, 165, parse_snr_range("4:1:6"), "closed",
                           Format::Csv)}) {
    CHECK(reserialize(parse_csv(doc)) == doc);
  }
}

TEST_CASE("threshold tracks") {
  const std::string csv = thresholds_command(
      8, 165, parse_snr_range("5:0.2:5.6"), "closed", Format::Csv);
  const auto rows = parse_csv(csv);
  CHECK(rows.size() == 1 + 4 * 6);  // header + 6 entries per SNR step
  // below the collision the (2,3) and (5,6) pairs carry the virtual flag
  int virtual_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][4] == "1") ++virtual_rows;
  }
  CHECK(virtual_rows == 8);
}

TEST_CASE("pber and ber commands") {
  const std::string bd = pber_command(8, std::nullopt, 10, Demodulator::BD,
                                      parse_snr_range("2:2:8"), Format::Csv);
  const auto rows = parse_csv(bd);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        std::vector<std::string>{"subject", "demod", "snr_db", "value",
                                 "method"});
  CHECK(rows[1][0] == "p165");
  CHECK(rows[1][4] == "closed8");

  const std::string abd = pber_command(8, 165, std::nullopt, Demodulator::ABD,
                                       parse_snr_range("2:2:8"), Format::Csv);
  const auto arows = parse_csv(abd);
  // max-log never beats the exact rule, point by point
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(arows[i][3]) >= std::stod(rows[i][3]) - 1e-12);
  }

  const std::string ber = ber_command(8, "brgc", Demodulator::ABD,
                                      parse_snr_range("0:5:10"), Format::Csv);
  CHECK(parse_csv(ber).size() == 4);

  // numeric path for an asymmetric class
  const std::string asy = pber_command(8, std::nullopt, 22, Demodulator::BD,
                                       parse_snr_range("0:4:8"), Format::Csv);
  const auto srows = parse_csv(asy);
  CHECK(srows[1][4] == "scan");
  double prev = 1.0;
  for (std::size_t i = 1; i < srows.size(); ++i) {
    const double v = std::stod(srows[i][3]);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("simulate command is deterministic") {
  const std::string a =
      simulate_command(8, 15, std::nullopt, Demodulator::BD, 6.0, 20000, 7, 4,
                       Format::Csv);
  const std::string b =
      simulate_command(8, 15, std::nullopt, Demodulator::BD, 6.0, 20000, 7, 16,
                       Format::Csv);
  CHECK(a == b);  // shard count never leaks into the result
  const auto rows = parse_csv(a);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "p15");
  CHECK(std::stod(rows[1][8]) < 5.0);  // |delta|/sigma column is sane
}

TEST_CASE("labelings command") {
  const std::string csv = labelings_command(8, false, Format::Csv);
  CHECK(csv ==
        "name,w,q,alpha\n"
        "brgc,15;60;102,1;2;6,14;12;-2;0;2;0;-2\n"
        "fbc,15;60;90,1;2;10,18;0;4;10;-8;2;-2\n"
        "nbc,15;51;85,1;5;11,22;-4;8;-10;8;-2;2\n"
        "bsgc,105;60;102,2;6;9,22;10;-8;4;-2;-2;0\n"
        "agc,90;105;85,9;10;11,36;-18;6;4;-4;-2;2\n");

  const std::string census = labelings_command(8, true, Format::Csv);
  CHECK(census == "order,total_valid,distinct_q\n8,40320,460\n");
  CHECK(labelings_command(4, true, Format::Csv) ==
        "order,total_valid,distinct_q\n4,24,3\n");
}
