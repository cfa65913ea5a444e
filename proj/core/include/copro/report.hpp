#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "copro/classify.hpp"
#include "copro/corpus.hpp"

namespace copro {

/// Rectangular table of pre-formatted cells.
struct ReportTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footnotes;

  /// Throws Error(InvalidRecord) when the arity differs from the header.
  void add_row(std::vector<std::string> row);
};

/// Fraction -> percentage with one decimal ("17.4", "-7.8"); never "-0.0".
std::string format_percent(double fraction);
/// Percentage points with one decimal, explicit minus for negatives.
std::string format_points(double points);
std::string format_fixed(double value, int decimals);
/// Spearman cell such as "0.36***" or "-1.00***".
std::string format_rho(double rho, std::string_view stars);

enum class Level { Uda, Sds };

struct ReportOptions {
  Level level = Level::Uda;
  bool field_filter = true;
  double threshold = 0.5;
};

/// Field rows for a report: codes at the requested level that keep at least
/// one member after the active-field filter, sorted by code.
struct ReportScope {
  std::vector<std::string> fields;
  std::vector<std::vector<AcademicIndex>> members;
  std::vector<AcademicIndex> total;  // union of all field members
  SdsFilter active;
  bool filtered = false;
};

ReportScope report_scope(const Corpus& corpus, const ReportOptions& options);

/// Publications, registered, productive and collaborative academics per field.
ReportTable emit_population_table(const Corpus& corpus, const ReportOptions& options);
/// Mean, % = 0, % = 100 of one propensity per field, descending by mean.
ReportTable emit_summary_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options,
                               Form form);
ReportTable emit_incidence_table(const Corpus& corpus, const ReportOptions& options, Form form);
/// Mean propensity and delta vs incidence for all four forms, ordered by mean C.
ReportTable emit_comparison_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options);
/// Pairwise Spearman correlations per field, ordered by field code.
ReportTable emit_correlation_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options);
/// Kruskal-Wallis across fields followed by Mann-Whitney for every pair.
ReportTable emit_tests_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options,
                             Form form);
ReportTable emit_indices_table(const Corpus& corpus, const ReportOptions& options);

enum class OutputFormat { Csv, Table, Objects };

void write_csv(std::ostream& out, const ReportTable& table);
void write_text(std::ostream& out, const ReportTable& table);
/// One JSON object per row keyed by header.
void write_objects(std::ostream& out, const ReportTable& table);
void write_table(std::ostream& out, const ReportTable& table, OutputFormat format);

/// RFC 4180 reader (quoted fields, LF or CRLF). Used to check emitted CSV.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Corpus file writers; the inverse of the ingest parsers.
void write_publications(std::ostream& out, std::span<const Publication> publications);
void write_academics(std::ostream& out, std::span<const Academic> academics);
void write_organizations(std::ostream& out, std::span<const Organization> organizations);
void write_taxonomy(std::ostream& out, const FieldTaxonomy& taxonomy);

}  // namespace copro
