#include "copro/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "copro/error.hpp"

namespace copro {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedRecord: return "MalformedRecord";
    case ParseErrorKind::MissingField: return "MissingField";
    case ParseErrorKind::BadYear: return "BadYear";
    case ParseErrorKind::BadAuthorCount: return "BadAuthorCount";
    case ParseErrorKind::BadFlag: return "BadFlag";
    case ParseErrorKind::DuplicateAuthorInRecord: return "DuplicateAuthorInRecord";
    case ParseErrorKind::DuplicateOrgInRecord: return "DuplicateOrgInRecord";
    case ParseErrorKind::NAuthorsLessThanAcademicList: return "NAuthorsLessThanAcademicList";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::TwoUdasForSds: return "TwoUdasForSds";
  }
  return "Unknown";
}

std::string ParseIssue::reason() const {
  std::string out(to_string(kind));
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

namespace {

struct Reject {
  ParseErrorKind kind;
  std::string detail;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Calls `handle(line_number, line)` for every non-blank record line. The
// handler returns nullopt to accept, or the rejection.
template <class Handler>
ParseReport for_each_record(std::istream& in, const ParseOptions& options, Handler handle) {
  if (!in.good()) throw Error(ErrorKind::UnreadableStream, "input stream is not readable");
  ParseReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (auto reject = handle(line_no, body)) {
      report.rejected.push_back({line_no, reject->kind, std::move(reject->detail)});
    } else {
      ++report.accepted;
    }
  }
  if (in.bad()) throw Error(ErrorKind::UnreadableStream, "read failed at line " + std::to_string(line_no + 1));
  return report;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<Reject> check_columns(const std::vector<std::string_view>& cols,
                                    std::initializer_list<const char*> names) {
  if (cols.size() > names.size()) {
    return Reject{ParseErrorKind::MalformedRecord,
                  "expected " + std::to_string(names.size()) + " columns, got " + std::to_string(cols.size())};
  }
  std::size_t i = 0;
  for (const char* name : names) {
    if (i >= cols.size() || cols[i].empty()) return Reject{ParseErrorKind::MissingField, name};
    ++i;
  }
  return std::nullopt;
}

std::optional<Reject> read_string_array(const nlohmann::json& obj, const char* key, std::vector<std::string>& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return Reject{ParseErrorKind::MissingField, key};
  if (!it->is_array()) return Reject{ParseErrorKind::MalformedRecord, std::string(key) + " is not an array"};
  for (const auto& v : *it) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
      return Reject{ParseErrorKind::MalformedRecord, std::string(key) + " holds a non-string or empty id"};
    }
    out.push_back(v.get<std::string>());
  }
  return std::nullopt;
}

std::optional<std::string> first_duplicate(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  auto it = std::adjacent_find(ids.begin(), ids.end());
  if (it == ids.end()) return std::nullopt;
  return *it;
}

std::optional<Reject> parse_publication_line(std::string_view line, Publication& pub) {
  const auto obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return Reject{ParseErrorKind::MalformedRecord, "not a JSON object"};

  auto id = obj.find("id");
  if (id == obj.end()) return Reject{ParseErrorKind::MissingField, "id"};
  if (!id->is_string() || id->get_ref<const std::string&>().empty()) {
    return Reject{ParseErrorKind::MalformedRecord, "id is not a non-empty string"};
  }
  pub.pub_id = id->get<std::string>();

  auto year = obj.find("year");
  if (year == obj.end()) return Reject{ParseErrorKind::MissingField, "year"};
  if (!year->is_number_integer() || year->get<long long>() < 1000 || year->get<long long>() > 9999) {
    return Reject{ParseErrorKind::BadYear, year->dump()};
  }
  pub.year = year->get<int>();

  auto n = obj.find("n_authors");
  if (n == obj.end()) return Reject{ParseErrorKind::MissingField, "n_authors"};
  if (!n->is_number_integer() || n->get<long long>() < 1 || n->get<long long>() > 1'000'000) {
    return Reject{ParseErrorKind::BadAuthorCount, n->dump()};
  }
  pub.n_authors = n->get<int>();

  if (auto r = read_string_array(obj, "academics", pub.academic_authors)) return r;
  if (auto r = read_string_array(obj, "orgs", pub.org_addresses)) return r;
  if (auto dup = first_duplicate(pub.academic_authors)) return Reject{ParseErrorKind::DuplicateAuthorInRecord, *dup};
  if (auto dup = first_duplicate(pub.org_addresses)) return Reject{ParseErrorKind::DuplicateOrgInRecord, *dup};
  if (static_cast<std::size_t>(pub.n_authors) < pub.academic_authors.size()) {
    return Reject{ParseErrorKind::NAuthorsLessThanAcademicList,
                  std::to_string(pub.n_authors) + " < " + std::to_string(pub.academic_authors.size())};
  }
  return std::nullopt;
}

}  // namespace

Parsed<Publication> parse_publications(std::istream& in, const ParseOptions& options) {
  Parsed<Publication> out;
  std::unordered_set<std::string> seen;
  out.report = for_each_record(in, options, [&](std::size_t, std::string_view line) -> std::optional<Reject> {
    Publication pub;
    if (auto r = parse_publication_line(line, pub)) return r;
    if (!seen.insert(pub.pub_id).second) return Reject{ParseErrorKind::DuplicateId, pub.pub_id};
    out.records.push_back(std::move(pub));
    return std::nullopt;
  });
  return out;
}

Parsed<Academic> parse_academics(std::istream& in, const ParseOptions& options) {
  Parsed<Academic> out;
  std::unordered_set<std::string> seen;
  out.report = for_each_record(in, options, [&](std::size_t, std::string_view line) -> std::optional<Reject> {
    const auto cols = split(line, options.delimiter);
    if (auto r = check_columns(cols, {"academic_id", "university_id", "sds"})) return r;
    Academic a{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), {}};
    if (!seen.insert(a.academic_id).second) return Reject{ParseErrorKind::DuplicateId, a.academic_id};
    out.records.push_back(std::move(a));
    return std::nullopt;
  });
  return out;
}

Parsed<Organization> parse_organizations(std::istream& in, const ParseOptions& options) {
  Parsed<Organization> out;
  std::unordered_set<std::string> seen;
  out.report = for_each_record(in, options, [&](std::size_t, std::string_view line) -> std::optional<Reject> {
    const auto cols = split(line, options.delimiter);
    if (auto r = check_columns(cols, {"org_id", "country_code", "is_university"})) return r;
    if (cols[2] != "0" && cols[2] != "1") return Reject{ParseErrorKind::BadFlag, std::string(cols[2])};
    Organization o{std::string(cols[0]), std::string(cols[1]), cols[2] == "1"};
    if (!seen.insert(o.org_id).second) return Reject{ParseErrorKind::DuplicateId, o.org_id};
    out.records.push_back(std::move(o));
    return std::nullopt;
  });
  return out;
}

ParsedTaxonomy parse_taxonomy(std::istream& in, const ParseOptions& options) {
  ParsedTaxonomy out;
  out.report = for_each_record(in, options, [&](std::size_t, std::string_view line) -> std::optional<Reject> {
    const auto cols = split(line, options.delimiter);
    if (auto r = check_columns(cols, {"sds_code", "uda_code"})) return r;
    if (const std::string* existing = out.taxonomy.uda_of(cols[0])) {
      if (*existing != cols[1]) {
        return Reject{ParseErrorKind::TwoUdasForSds,
                      std::string(cols[0]) + " already in " + *existing + ", not " + std::string(cols[1])};
      }
      return Reject{ParseErrorKind::DuplicateId, std::string(cols[0])};
    }
    out.taxonomy.add(std::string(cols[0]), std::string(cols[1]));
    return std::nullopt;
  });
  return out;
}

YearRange parse_year_range(std::string_view text) {
  const auto colon = text.find(':');
  auto parse_int = [&](std::string_view s, int& value) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  YearRange range;
  if (colon == std::string_view::npos || !parse_int(text.substr(0, colon), range.first) ||
      !parse_int(text.substr(colon + 1), range.last) || range.first > range.last) {
    throw Error(ErrorKind::UsageError, "year range must look like A:B with A <= B, got '" + std::string(text) + "'");
  }
  return range;
}

std::vector<Publication> filter_by_years(std::vector<Publication> publications, YearRange range) {
  std::erase_if(publications, [&](const Publication& p) { return !range.contains(p.year); });
  return publications;
}

bool LoadReport::clean() const {
  return publications.clean() && academics.clean() && organizations.clean() && taxonomy.clean();
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableStream, "cannot open " + path.string());
  return in;
}

}  // namespace

CorpusInputs load_corpus_inputs(const CorpusFiles& files, const ParseOptions& options, LoadReport& report) {
  CorpusInputs inputs;
  {
    auto in = open_input(files.taxonomy);
    auto parsed = parse_taxonomy(in, options);
    inputs.taxonomy = std::move(parsed.taxonomy);
    report.taxonomy = std::move(parsed.report);
  }
  {
    auto in = open_input(files.organizations);
    auto parsed = parse_organizations(in, options);
    inputs.organizations = std::move(parsed.records);
    report.organizations = std::move(parsed.report);
  }
  {
    auto in = open_input(files.academics);
    auto parsed = parse_academics(in, options);
    inputs.academics = std::move(parsed.records);
    report.academics = std::move(parsed.report);
  }
  {
    auto in = open_input(files.publications);
    auto parsed = parse_publications(in, options);
    inputs.publications = std::move(parsed.records);
    report.publications = std::move(parsed.report);
  }
  return inputs;
}

}  // namespace copro
