#include "copro/indicators.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "copro/error.hpp"

namespace copro {

double PropensitySet::operator[](Form form) const {
  switch (form) {
    case Form::C: return c;
    case Form::CI: return ci;
    case Form::CED: return ced;
    case Form::CEF: return cef;
  }
  return 0.0;
}

PropensitySet propensities(const CollaborationProfile& profile) {
  if (profile.p == 0) throw Error(ErrorKind::NotProductive, profile.academic_id);
  const double p = profile.p;
  return {profile.cp / p, profile.cip / p, profile.cedp / p, profile.cefp / p};
}

FieldSummary field_summary(const ProfileTable& profiles, std::span<const AcademicIndex> members, Form form,
                           std::string field_code) {
  FieldSummary s{std::move(field_code), form};
  double sum = 0.0;
  std::size_t zero = 0;
  std::size_t full = 0;
  for (AcademicIndex a : members) {
    const CollaborationProfile& row = profiles[a];
    if (row.p == 0) continue;
    const std::uint32_t k = row.count(form);
    ++s.n_productive;
    sum += static_cast<double>(k) / row.p;
    zero += k == 0;
    full += k == row.p;
  }
  if (s.n_productive == 0) throw Error(ErrorKind::EmptyField, s.field_code);
  const double n = static_cast<double>(s.n_productive);
  s.mean = sum / n;
  s.pct_zero = 100.0 * static_cast<double>(zero) / n;
  s.pct_full = 100.0 * static_cast<double>(full) / n;
  return s;
}

FieldSummary field_summary(const Corpus& corpus, const ProfileTable& profiles, const FieldScope& scope,
                           Form form, const SdsFilter* active_sds) {
  auto members = field_members(corpus, scope, active_sds);
  return field_summary(profiles, members, form, scope.label());
}

IncidenceSummary incidence(const Corpus& corpus, std::span<const AcademicIndex> members, Form form,
                           std::string field_code) {
  // bit 0: in union, bit 1: form satisfied for some member
  std::vector<std::uint8_t> marks(corpus.publications().size(), 0);
  for (AcademicIndex a : members) {
    for (PublicationIndex p : corpus.publications_of(a)) {
      if (marks[p] & 2) continue;
      marks[p] |= 1;
      if (classify_for(corpus, p, a).has(form)) marks[p] |= 2;
    }
  }
  IncidenceSummary s{std::move(field_code), form};
  for (std::uint8_t m : marks) {
    s.n_pubs_union += (m & 1);
    s.n_pubs_with_form += (m >> 1) & 1;
  }
  if (s.n_pubs_union == 0) throw Error(ErrorKind::EmptyField, s.field_code);
  s.incidence = static_cast<double>(s.n_pubs_with_form) / static_cast<double>(s.n_pubs_union);
  return s;
}

IncidenceSummary incidence(const Corpus& corpus, const FieldScope& scope, Form form,
                           const SdsFilter* active_sds) {
  auto members = field_members(corpus, scope, active_sds);
  return incidence(corpus, members, form, scope.label());
}

ComparisonRow compare(const Corpus& corpus, const ProfileTable& profiles,
                      std::span<const AcademicIndex> members, Form form, std::string field_code) {
  const FieldSummary s = field_summary(profiles, members, form, field_code);
  const IncidenceSummary inc = incidence(corpus, members, form, field_code);
  return {std::move(field_code), form, s.mean, inc.incidence, 100.0 * (s.mean - inc.incidence)};
}

ComparisonRow compare(const Corpus& corpus, const ProfileTable& profiles, const FieldScope& scope, Form form,
                      const SdsFilter* active_sds) {
  auto members = field_members(corpus, scope, active_sds);
  return compare(corpus, profiles, members, form, scope.label());
}

ClassicalIndices classical_indices(std::span<const int> author_counts) {
  if (author_counts.empty()) throw Error(ErrorKind::EmptyField, "no publications");
  std::map<int, std::size_t> histogram;
  for (int j : author_counts) {
    if (j < 1) throw Error(ErrorKind::DomainError, "author count below 1");
    ++histogram[j];
  }
  ClassicalIndices r;
  r.n_publications = author_counts.size();
  r.max_authors = histogram.rbegin()->first;
  const double n = static_cast<double>(r.n_publications);
  double weighted = 0.0;
  double inverse = 0.0;
  for (const auto& [j, f] : histogram) {
    weighted += static_cast<double>(j) * static_cast<double>(f);
    inverse += static_cast<double>(f) / j;
  }
  const auto single = histogram.count(1) ? histogram.at(1) : 0;
  r.degree_of_collaboration = (n - static_cast<double>(single)) / n;
  r.collaborative_index = weighted / n;
  r.collaborative_coefficient = 1.0 - inverse / n;
  r.revised_cc = r.max_authors >= 2 ? r.collaborative_coefficient / (1.0 - 1.0 / r.max_authors) : 0.0;
  return r;
}

ClassicalIndices classical_indices(const Corpus& corpus, std::span<const AcademicIndex> members) {
  std::vector<int> counts;
  for (PublicationIndex p : union_publications(corpus, members)) {
    counts.push_back(corpus.publication(p).n_authors);
  }
  return classical_indices(counts);
}

ClassicalIndices classical_indices(const Corpus& corpus, const FieldScope& scope, const SdsFilter* active_sds) {
  auto members = field_members(corpus, scope, active_sds);
  return classical_indices(corpus, members);
}

}  // namespace copro
