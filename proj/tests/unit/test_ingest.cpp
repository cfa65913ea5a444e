#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "copro/error.hpp"
#include "copro/ingest.hpp"
#include "copro/report.hpp"
#include "support/random_corpus.hpp"

using namespace copro;

TEST_SUITE("ingest") {

TEST_CASE("publication record accepted") {
  std::istringstream in(R"({"id":"P1","year":2008,"n_authors":3,"academics":["a1","a2"],"orgs":["uniX","MIT"]})");
  auto parsed = parse_publications(in);
  REQUIRE(parsed.report.accepted == 1);
  CHECK(parsed.report.rejected.empty());
  const Publication& p = parsed.records.at(0);
  CHECK(p.pub_id == "P1");
  CHECK(p.year == 2008);
  CHECK(p.n_authors == 3);
  CHECK(p.academic_authors == std::vector<std::string>{"a1", "a2"});
  CHECK(p.org_addresses == std::vector<std::string>{"uniX", "MIT"});
}

TEST_CASE("publication rejections carry line and reason") {
  const auto reject_kind = [](const std::string& line) {
    std::istringstream in(line);
    auto parsed = parse_publications(in);
    REQUIRE(parsed.report.rejected.size() == 1);
    CHECK(parsed.report.rejected[0].line == 1);
    return parsed.report.rejected[0].kind;
  };
  CHECK(reject_kind(R"({"id":"P1","year":2008,"n_authors":1,"academics":["a1","a2"],"orgs":[]})") ==
        ParseErrorKind::NAuthorsLessThanAcademicList);
  CHECK(reject_kind(R"({"id":"P1","n_authors":1,"academics":[],"orgs":[]})") == ParseErrorKind::MissingField);
  CHECK(reject_kind(R"({"id":"P1","year":"2008","n_authors":1,"academics":[],"orgs":[]})") ==
        ParseErrorKind::BadYear);
  CHECK(reject_kind(R"({"id":"P1","year":20.5,"n_authors":1,"academics":[],"orgs":[]})") == ParseErrorKind::BadYear);
  CHECK(reject_kind(R"({"id":"P1","year":2008,"n_authors":3,"academics":["a1","a1"],"orgs":[]})") ==
        ParseErrorKind::DuplicateAuthorInRecord);
  CHECK(reject_kind(R"({"id":"P1","year":2008,"n_authors":3,"academics":[],"orgs":["o","o"]})") ==
        ParseErrorKind::DuplicateOrgInRecord);
  CHECK(reject_kind(R"({"id":"P1","year":2008,"n_authors":0,"academics":[],"orgs":[]})") ==
        ParseErrorKind::BadAuthorCount);
  CHECK(reject_kind("not json") == ParseErrorKind::MalformedRecord);
  CHECK(reject_kind(R"({"id":"P1","year":2008,"n_authors":2,"academics":"a1","orgs":[]})") ==
        ParseErrorKind::MalformedRecord);
}

TEST_CASE("ten lines with one bad line") {
  std::ostringstream text;
  for (int i = 1; i <= 10; ++i) {
    if (i == 7) {
      text << R"({"id":"bad","year":2008,"n_authors":1,"academics":["a","b"],"orgs":[]})" << '\n';
    } else {
      text << R"({"id":"P)" << i << R"(","year":2008,"n_authors":1,"academics":["a"],"orgs":[]})" << '\n';
    }
    if (i == 3) text << "   \n";  // blank lines are not records
  }
  std::istringstream in(text.str());
  auto parsed = parse_publications(in);
  CHECK(parsed.report.accepted == 9);
  REQUIRE(parsed.report.rejected.size() == 1);
  CHECK(parsed.report.rejected[0].line == 8);
  CHECK(parsed.report.total() == 10);
  CHECK(parsed.records[2].pub_id == "P3");
  CHECK(parsed.records[3].pub_id == "P4");
}

TEST_CASE("header line is skipped when flagged") {
  std::istringstream in("academic_id,university_id,sds\na1,uniX,FIS/01\n");
  auto parsed = parse_academics(in, {.has_header = true});
  CHECK(parsed.report.accepted == 1);
  CHECK(parsed.report.total() == 1);
  CHECK(parsed.records[0] == Academic{"a1", "uniX", "FIS/01", {}});
}

TEST_CASE("registry files") {
  SUBCASE("academics: duplicates and missing columns") {
    std::istringstream in("a1,uniX,FIS/01\na1,uniY,FIS/02\na2,uniX\na3, uniX , FIS/01 \n");
    auto parsed = parse_academics(in);
    CHECK(parsed.report.accepted == 2);
    REQUIRE(parsed.report.rejected.size() == 2);
    CHECK(parsed.report.rejected[0].line == 2);
    CHECK(parsed.report.rejected[0].kind == ParseErrorKind::DuplicateId);
    CHECK(parsed.report.rejected[1].kind == ParseErrorKind::MissingField);
    CHECK(parsed.records[1].university_id == "uniX");
  }
  SUBCASE("organizations: flag must be 0 or 1") {
    std::istringstream in("uniX,IT,1\nMIT,US,0\nodd,FR,yes\n,IT,1\n");
    auto parsed = parse_organizations(in);
    CHECK(parsed.report.accepted == 2);
    CHECK(parsed.records[0].is_university);
    CHECK_FALSE(parsed.records[1].is_university);
    REQUIRE(parsed.report.rejected.size() == 2);
    CHECK(parsed.report.rejected[0].kind == ParseErrorKind::BadFlag);
    CHECK(parsed.report.rejected[1].kind == ParseErrorKind::MissingField);
  }
  SUBCASE("taxonomy: two entries") {
    std::istringstream in("FIS/01,PHY\nFIS/02,PHY\n");
    auto parsed = parse_taxonomy(in);
    CHECK(parsed.taxonomy.size() == 2);
    CHECK(*parsed.taxonomy.uda_of("FIS/02") == "PHY");
  }
  SUBCASE("taxonomy: SDS under two UDAs") {
    std::istringstream in("FIS/01,PHY\nFIS/01,CHE\n");
    auto parsed = parse_taxonomy(in);
    CHECK(parsed.taxonomy.size() == 1);
    REQUIRE(parsed.report.rejected.size() == 1);
    CHECK(parsed.report.rejected[0].kind == ParseErrorKind::TwoUdasForSds);
    CHECK(parsed.report.rejected[0].line == 2);
  }
  SUBCASE("taxonomy: empty file") {
    std::istringstream in("");
    auto parsed = parse_taxonomy(in);
    CHECK(parsed.taxonomy.empty());
    CHECK(parsed.report.total() == 0);
  }
}

TEST_CASE("unreadable stream is fatal") {
  std::istringstream in("x");
  in.setstate(std::ios::badbit);
  CHECK_THROWS_AS(parse_taxonomy(in), Error);
}

TEST_CASE("year range") {
  CHECK(parse_year_range("2006:2010").first == 2006);
  CHECK(parse_year_range("2006:2010").last == 2010);
  CHECK_THROWS_AS(parse_year_range("2010:2006"), Error);
  CHECK_THROWS_AS(parse_year_range("2006"), Error);
  std::vector<Publication> pubs = {{"a", 2005, 1, {}, {}}, {"b", 2006, 1, {}, {}}, {"c", 2010, 1, {}, {}},
                                   {"d", 2011, 1, {}, {}}};
  auto kept = filter_by_years(pubs, {2006, 2010});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].pub_id == "b");
  CHECK(kept[1].pub_id == "c");
}

TEST_CASE("write then parse reproduces the records") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CorpusInputs in = testing::random_corpus(rng);
    std::stringstream pubs, acad, orgs, tax;
    write_publications(pubs, in.publications);
    write_academics(acad, in.academics);
    write_organizations(orgs, in.organizations);
    write_taxonomy(tax, in.taxonomy);
    auto p = parse_publications(pubs);
    auto a = parse_academics(acad);
    auto o = parse_organizations(orgs);
    auto t = parse_taxonomy(tax);
    CHECK(p.report.clean());
    CHECK(p.records == in.publications);
    CHECK(a.records == in.academics);
    CHECK(o.records == in.organizations);
    CHECK(t.taxonomy == in.taxonomy);
  }
}

TEST_CASE("permuting lines permutes the accepted set") {
  std::mt19937_64 rng(5);
  const CorpusInputs in = testing::random_corpus(rng, {.max_publications = 40});
  std::stringstream text;
  write_publications(text, in.publications);
  std::vector<std::string> lines;
  for (std::string line; std::getline(text, line);) lines.push_back(line);
  lines.push_back(R"({"id":"broken","year":1,"n_authors":1,"academics":[],"orgs":[]})");
  lines.push_back("{}");

  auto parse_lines = [](const std::vector<std::string>& ls) {
    std::ostringstream joined;
    for (const auto& l : ls) joined << l << '\n';
    std::istringstream is(joined.str());
    auto parsed = parse_publications(is);
    std::vector<std::string> ids;
    for (const auto& p : parsed.records) ids.push_back(p.pub_id);
    std::sort(ids.begin(), ids.end());
    return std::pair{ids, parsed.report.rejected.size()};
  };
  const auto reference = parse_lines(lines);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(lines.begin(), lines.end(), rng);
    CHECK(parse_lines(lines) == reference);
  }
}

}  // TEST_SUITE
