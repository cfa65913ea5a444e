#pragma once

// Line-oriented readers for the four corpus files. Malformed lines are
// rejected with their 1-based line number and parsing continues.
//
//   publications   one JSON object per line:
//                  {"id": "P1", "year": 2008, "n_authors": 3,
//                   "academics": ["a1", "a2"], "orgs": ["uniX", "MIT"]}
//   academics      academic_id,university_id,sds
//   organizations  org_id,country_code,is_university(0|1)
//   taxonomy       sds_code,uda_code

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "copro/corpus.hpp"

namespace copro {

enum class ParseErrorKind {
  MalformedRecord,
  MissingField,
  BadYear,
  BadAuthorCount,
  BadFlag,
  DuplicateAuthorInRecord,
  DuplicateOrgInRecord,
  NAuthorsLessThanAcademicList,
  DuplicateId,
  TwoUdasForSds,
};

std::string_view to_string(ParseErrorKind kind);

struct ParseIssue {
  std::size_t line = 0;
  ParseErrorKind kind = ParseErrorKind::MalformedRecord;
  std::string detail;

  std::string reason() const;
};

/// accepted + rejected.size() equals the number of non-blank record lines.
struct ParseReport {
  std::size_t accepted = 0;
  std::vector<ParseIssue> rejected;

  std::size_t total() const { return accepted + rejected.size(); }
  bool clean() const { return rejected.empty(); }
};

struct ParseOptions {
  bool has_header = false;
  char delimiter = ',';
};

template <class T>
struct Parsed {
  std::vector<T> records;
  ParseReport report;
};

struct ParsedTaxonomy {
  FieldTaxonomy taxonomy;
  ParseReport report;
};

// All throw Error(UnreadableStream) when the stream is not readable.
Parsed<Publication> parse_publications(std::istream& in, const ParseOptions& options = {});
Parsed<Academic> parse_academics(std::istream& in, const ParseOptions& options = {});
Parsed<Organization> parse_organizations(std::istream& in, const ParseOptions& options = {});
ParsedTaxonomy parse_taxonomy(std::istream& in, const ParseOptions& options = {});

/// Inclusive year range.
struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const { return year >= first && year <= last; }
};

/// Parses "A:B". Throws Error(UsageError).
YearRange parse_year_range(std::string_view text);

std::vector<Publication> filter_by_years(std::vector<Publication> publications, YearRange range);

struct CorpusFiles {
  std::filesystem::path publications;
  std::filesystem::path academics;
  std::filesystem::path organizations;
  std::filesystem::path taxonomy;
};

struct LoadReport {
  ParseReport publications;
  ParseReport academics;
  ParseReport organizations;
  ParseReport taxonomy;

  bool clean() const;
};

/// Parses the four files into corpus inputs (not yet cross-validated).
CorpusInputs load_corpus_inputs(const CorpusFiles& files, const ParseOptions& options, LoadReport& report);

}  // namespace copro
