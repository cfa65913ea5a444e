#include "copro/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "copro/correlation.hpp"
#include "copro/error.hpp"
#include "copro/indicators.hpp"
#include "copro/stats.hpp"

namespace copro {

void ReportTable::add_row(std::vector<std::string> row) {
  if (row.size() != headers.size()) {
    throw Error(ErrorKind::InvalidRecord, "row arity " + std::to_string(row.size()) + " != header arity " +
                                              std::to_string(headers.size()) + " in '" + title + "'");
  }
  rows.push_back(std::move(row));
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_percent(double fraction) { return format_fixed(100.0 * fraction, 1); }

std::string format_points(double points) { return format_fixed(points, 1); }

std::string format_rho(double rho, std::string_view stars) { return format_fixed(rho, 2) + std::string(stars); }

namespace {

std::string count_with_share(std::size_t part, std::size_t whole) {
  std::string s = std::to_string(part);
  if (whole > 0) s += " (" + format_percent(static_cast<double>(part) / static_cast<double>(whole)) + "%)";
  return s;
}

std::string level_name(Level level) { return level == Level::Uda ? "UDA" : "SDS"; }

std::string omitted_note(const std::vector<std::string>& omitted, const char* why) {
  std::string s = std::string("Omitted (") + why + "):";
  for (const auto& f : omitted) s += " " + f;
  return s;
}

template <class Key>
void sort_desc_with_code(std::vector<std::size_t>& order, const std::vector<std::string>& codes, Key key) {
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka > kb;
    return codes[a] < codes[b];
  });
}

std::vector<double> propensity_values(const ProfileTable& profiles, std::span<const AcademicIndex> members,
                                      Form form) {
  std::vector<double> out;
  for (AcademicIndex a : members) {
    const CollaborationProfile& row = profiles[a];
    if (row.p > 0) out.push_back(static_cast<double>(row.count(form)) / row.p);
  }
  return out;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

}  // namespace

ReportScope report_scope(const Corpus& corpus, const ReportOptions& options) {
  ReportScope scope;
  scope.filtered = options.field_filter;
  if (options.field_filter) scope.active = filter_active_fields(corpus, options.threshold);
  const SdsFilter* active = options.field_filter ? &scope.active : nullptr;
  const auto codes = options.level == Level::Uda ? corpus.taxonomy().udas() : corpus.taxonomy().sds_codes();
  for (const auto& code : codes) {
    const FieldScope fs = options.level == Level::Uda ? FieldScope::uda(code) : FieldScope::sds(code);
    auto members = field_members(corpus, fs, active);
    if (members.empty()) continue;
    scope.total.insert(scope.total.end(), members.begin(), members.end());
    scope.fields.push_back(code);
    scope.members.push_back(std::move(members));
  }
  std::sort(scope.total.begin(), scope.total.end());
  return scope;
}

ReportTable emit_population_table(const Corpus& corpus, const ReportOptions& options) {
  const ReportScope scope = report_scope(corpus, options);
  ReportTable t;
  t.title = "Population of academics per " + level_name(options.level);
  t.headers = {level_name(options.level), "Publications", "Total", "Productive", "Collaborative"};

  struct Counts {
    std::size_t pubs = 0, total = 0, productive = 0, collaborative = 0;
  };
  auto count = [&](std::span<const AcademicIndex> members) {
    Counts c;
    c.pubs = union_publications(corpus, members).size();
    c.total = members.size();
    for (AcademicIndex a : members) {
      auto pubs = corpus.publications_of(a);
      if (pubs.empty()) continue;
      ++c.productive;
      c.collaborative += std::any_of(pubs.begin(), pubs.end(),
                                     [&](PublicationIndex p) { return corpus.publication(p).n_authors >= 2; });
    }
    return c;
  };
  std::vector<Counts> rows;
  std::size_t pub_sum = 0;
  for (const auto& members : scope.members) {
    rows.push_back(count(members));
    pub_sum += rows.back().pubs;
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  sort_desc_with_code(order, scope.fields, [&](std::size_t i) { return static_cast<double>(rows[i].pubs); });
  auto emit = [&](const std::string& label, const Counts& c) {
    t.add_row({label, std::to_string(c.pubs), std::to_string(c.total), count_with_share(c.productive, c.total),
               count_with_share(c.collaborative, c.total)});
  };
  for (std::size_t i : order) emit(scope.fields[i], rows[i]);
  const Counts total = count(scope.total);
  emit("Total", total);
  if (pub_sum > total.pubs) {
    t.footnotes.push_back("Total publications count each publication once; the field rows sum to " +
                          std::to_string(pub_sum - total.pubs) +
                          " more because co-authored publications are counted in every field of their authors.");
  }
  if (scope.filtered) {
    t.footnotes.push_back("Fields restricted to SDSs where at least " + format_percent(options.threshold) +
                          "% of academics are productive.");
  }
  return t;
}

ReportTable emit_summary_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options,
                               Form form) {
  const ReportScope scope = report_scope(corpus, options);
  const std::string f(to_string(form));
  ReportTable t;
  t.title = "Propensity " + f + " per " + level_name(options.level) + " (percentage values)";
  t.headers = {level_name(options.level), "Productive", "Mean " + f, "% " + f + " = 0%", "% " + f + " = 100%"};

  std::vector<FieldSummary> summaries;
  std::vector<std::string> codes;
  std::vector<std::string> omitted;
  for (std::size_t i = 0; i < scope.fields.size(); ++i) {
    try {
      summaries.push_back(field_summary(profiles, scope.members[i], form, scope.fields[i]));
      codes.push_back(scope.fields[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyField) throw;
      omitted.push_back(scope.fields[i]);
    }
  }
  std::vector<std::size_t> order(summaries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  sort_desc_with_code(order, codes, [&](std::size_t i) { return summaries[i].mean; });
  auto emit = [&](const FieldSummary& s) {
    t.add_row({s.field_code, std::to_string(s.n_productive), format_percent(s.mean), format_fixed(s.pct_zero, 1),
               format_fixed(s.pct_full, 1)});
  };
  for (std::size_t i : order) emit(summaries[i]);
  if (!summaries.empty()) emit(field_summary(profiles, scope.total, form, "Total"));
  if (!omitted.empty()) t.footnotes.push_back(omitted_note(omitted, "no productive academics"));
  return t;
}

ReportTable emit_incidence_table(const Corpus& corpus, const ReportOptions& options, Form form) {
  const ReportScope scope = report_scope(corpus, options);
  const std::string f(to_string(form));
  ReportTable t;
  t.title = "Incidence of " + f + " per " + level_name(options.level) + " (percentage values)";
  t.headers = {level_name(options.level), "Publications", "With " + f, "Incidence " + f};
  std::vector<IncidenceSummary> rows;
  std::vector<std::string> codes;
  std::vector<std::string> omitted;
  for (std::size_t i = 0; i < scope.fields.size(); ++i) {
    try {
      rows.push_back(incidence(corpus, scope.members[i], form, scope.fields[i]));
      codes.push_back(scope.fields[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyField) throw;
      omitted.push_back(scope.fields[i]);
    }
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  sort_desc_with_code(order, codes, [&](std::size_t i) { return rows[i].incidence; });
  auto emit = [&](const IncidenceSummary& s) {
    t.add_row({s.field_code, std::to_string(s.n_pubs_union), std::to_string(s.n_pubs_with_form),
               format_percent(s.incidence)});
  };
  for (std::size_t i : order) emit(rows[i]);
  if (!rows.empty()) emit(incidence(corpus, scope.total, form, "Total"));
  if (!omitted.empty()) t.footnotes.push_back(omitted_note(omitted, "no publications"));
  return t;
}

ReportTable emit_comparison_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options) {
  const ReportScope scope = report_scope(corpus, options);
  ReportTable t;
  t.title = "Mean propensity and difference from incidence per " + level_name(options.level) +
            " (percentage values)";
  t.headers = {level_name(options.level)};
  for (Form f : kAllForms) {
    t.headers.emplace_back(to_string(f));
    t.headers.push_back("Delta " + std::string(to_string(f)));
  }
  using Row = std::array<ComparisonRow, 4>;
  auto compute = [&](std::span<const AcademicIndex> members, const std::string& code) {
    Row row;
    for (Form f : kAllForms) row[static_cast<std::size_t>(f)] = compare(corpus, profiles, members, f, code);
    return row;
  };
  std::vector<Row> rows;
  std::vector<std::string> codes;
  std::vector<std::string> omitted;
  for (std::size_t i = 0; i < scope.fields.size(); ++i) {
    try {
      rows.push_back(compute(scope.members[i], scope.fields[i]));
      codes.push_back(scope.fields[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyField) throw;
      omitted.push_back(scope.fields[i]);
    }
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  sort_desc_with_code(order, codes, [&](std::size_t i) { return rows[i][0].mean_propensity; });
  auto emit = [&](const std::string& label, const Row& row) {
    std::vector<std::string> cells{label};
    for (const auto& c : row) {
      cells.push_back(format_percent(c.mean_propensity));
      cells.push_back(format_points(c.delta));
    }
    t.add_row(std::move(cells));
  };
  for (std::size_t i : order) emit(codes[i], rows[i]);
  if (!rows.empty()) emit("Total", compute(scope.total, "Total"));
  t.footnotes.push_back("Delta = mean propensity - incidence, in percentage points.");
  if (!omitted.empty()) t.footnotes.push_back(omitted_note(omitted, "no productive academics"));
  return t;
}

ReportTable emit_correlation_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options) {
  const ReportScope scope = report_scope(corpus, options);
  ReportTable t;
  t.title = "Spearman correlation between propensity indicators per " + level_name(options.level);
  t.headers = {level_name(options.level)};
  std::vector<std::pair<Form, Form>> pairs;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      pairs.emplace_back(kAllForms[i], kAllForms[j]);
      t.headers.push_back(std::string(to_string(kAllForms[i])) + " - " + std::string(to_string(kAllForms[j])));
    }
  }
  std::vector<std::string> omitted;
  auto emit = [&](const std::string& label, std::span<const AcademicIndex> members) {
    std::vector<PropensitySet> sets;
    for (AcademicIndex a : members) {
      if (profiles[a].p > 0) sets.push_back(propensities(profiles[a]));
    }
    if (sets.size() < 3) {
      omitted.push_back(label);
      return;
    }
    const CorrelationMatrix m = correlation_matrix(sets);
    std::vector<std::string> cells{label};
    for (const auto& [a, b] : pairs) {
      const CorrelationCell& cell = m.at(a, b);
      cells.push_back(cell.result ? format_rho(cell.result->statistic, cell.result->stars) : "n/a");
    }
    t.add_row(std::move(cells));
  };
  for (std::size_t i = 0; i < scope.fields.size(); ++i) emit(scope.fields[i], scope.members[i]);
  if (!scope.fields.empty()) emit("Total", scope.total);
  t.footnotes.push_back("Significance level: *** p < 0.001; ** p < 0.01; * p < 0.05");
  t.footnotes.push_back("n/a: an indicator is constant across the field's academics.");
  if (!omitted.empty()) t.footnotes.push_back(omitted_note(omitted, "fewer than 3 productive academics"));
  return t;
}

ReportTable emit_tests_table(const Corpus& corpus, const ProfileTable& profiles, const ReportOptions& options,
                             Form form) {
  const ReportScope scope = report_scope(corpus, options);
  ReportTable t;
  t.title = "Differences in propensity " + std::string(to_string(form)) + " across " + level_name(options.level) +
            "s";
  t.headers = {"Test", "Groups", "Statistic", "p-value", "Significance", "Method"};
  std::vector<std::string> codes;
  std::vector<std::vector<double>> groups;
  for (std::size_t i = 0; i < scope.fields.size(); ++i) {
    auto values = propensity_values(profiles, scope.members[i], form);
    if (values.empty()) continue;
    codes.push_back(scope.fields[i]);
    groups.push_back(std::move(values));
  }
  auto emit = [&](const char* test, const std::string& label, const stats::TestResult& r) {
    t.add_row({test, label, format_fixed(r.statistic, 4), format_p(r.p_value), r.stars, r.method_note});
  };
  std::size_t pooled = 0;
  for (const auto& g : groups) pooled += g.size();
  if (groups.size() >= 2 && pooled >= 3) {
    emit("Kruskal-Wallis", "all (" + std::to_string(groups.size()) + ")", stats::kruskal_wallis(groups));
  } else {
    t.footnotes.push_back("Kruskal-Wallis needs at least two fields with productive academics.");
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      emit("Mann-Whitney U", codes[i] + " vs " + codes[j], stats::mann_whitney_u(groups[i], groups[j]));
    }
  }
  t.footnotes.push_back("Two-sided tests; no multiple-comparison correction.");
  return t;
}

ReportTable emit_indices_table(const Corpus& corpus, const ReportOptions& options) {
  const ReportScope scope = report_scope(corpus, options);
  ReportTable t;
  t.title = "Classical co-authorship indices per " + level_name(options.level);
  t.headers = {level_name(options.level), "Publications", "Max authors", "DC", "CI (Lawani)", "CC", "RCC"};
  std::vector<std::string> omitted;
  auto emit = [&](const std::string& label, std::span<const AcademicIndex> members) {
    try {
      const ClassicalIndices r = classical_indices(corpus, members);
      t.add_row({label, std::to_string(r.n_publications), std::to_string(r.max_authors),
                 format_fixed(r.degree_of_collaboration, 4), format_fixed(r.collaborative_index, 4),
                 format_fixed(r.collaborative_coefficient, 4), format_fixed(r.revised_cc, 4)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyField) throw;
      omitted.push_back(label);
    }
  };
  for (std::size_t i = 0; i < scope.fields.size(); ++i) emit(scope.fields[i], scope.members[i]);
  if (!scope.fields.empty()) emit("Total", scope.total);
  if (!omitted.empty()) t.footnotes.push_back(omitted_note(omitted, "no publications"));
  return t;
}

namespace {

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_cell(cells[i]);
  }
  out << '\n';
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  double v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Display width in code points (UTF-8 continuation bytes do not count).
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

void write_csv(std::ostream& out, const ReportTable& table) {
  csv_line(out, table.headers);
  for (const auto& row : table.rows) csv_line(out, row);
}

void write_text(std::ostream& out, const ReportTable& table) {
  std::vector<std::size_t> width(table.headers.size(), 0);
  for (std::size_t i = 0; i < width.size(); ++i) width[i] = display_width(table.headers[i]);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display_width(row[i]));
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t pad = width[i] - display_width(cells[i]);
      if (i == 0) {
        out << cells[i] << std::string(pad, ' ');
      } else {
        out << "  " << std::string(pad, ' ') << cells[i];
      }
    }
    out << '\n';
  };
  if (!table.title.empty()) out << table.title << "\n\n";
  line(table.headers);
  for (const auto& row : table.rows) line(row);
  if (!table.footnotes.empty()) out << '\n';
  for (const auto& note : table.footnotes) out << note << '\n';
}

void write_objects(std::ostream& out, const ReportTable& table) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0 && is_number(row[i])) {
        obj[table.headers[i]] = std::stod(row[i]);
      } else {
        obj[table.headers[i]] = row[i];
      }
    }
    out << obj.dump() << '\n';
  }
}

void write_table(std::ostream& out, const ReportTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: write_csv(out, table); break;
    case OutputFormat::Table: write_text(out, table); break;
    case OutputFormat::Objects: write_objects(out, table); break;
  }
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell += '"';
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_publications(std::ostream& out, std::span<const Publication> publications) {
  for (const auto& p : publications) {
    nlohmann::ordered_json obj;
    obj["id"] = p.pub_id;
    obj["year"] = p.year;
    obj["n_authors"] = p.n_authors;
    obj["academics"] = p.academic_authors;
    obj["orgs"] = p.org_addresses;
    out << obj.dump() << '\n';
  }
}

void write_academics(std::ostream& out, std::span<const Academic> academics) {
  for (const auto& a : academics) out << a.academic_id << ',' << a.university_id << ',' << a.sds << '\n';
}

void write_organizations(std::ostream& out, std::span<const Organization> organizations) {
  for (const auto& o : organizations) out << o.org_id << ',' << o.country_code << ',' << (o.is_university ? 1 : 0) << '\n';
}

void write_taxonomy(std::ostream& out, const FieldTaxonomy& taxonomy) {
  for (const auto& [sds, uda] : taxonomy.entries()) out << sds << ',' << uda << '\n';
}

}  // namespace copro
