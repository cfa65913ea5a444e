#include "copro/corpus.hpp"

#include <algorithm>
#include <utility>

#include "copro/error.hpp"

namespace copro {

void FieldTaxonomy::add(std::string sds, std::string uda) {
  if (sds.empty() || uda.empty()) {
    throw Error(ErrorKind::InvalidRecord, "empty taxonomy code");
  }
  auto [it, inserted] = entries_.try_emplace(std::move(sds), std::move(uda));
  if (!inserted) {
    throw Error(ErrorKind::DuplicateId, "sds " + it->first);
  }
}

const std::string* FieldTaxonomy::uda_of(std::string_view sds) const {
  auto it = entries_.find(sds);
  return it == entries_.end() ? nullptr : &it->second;
}

bool FieldTaxonomy::has_uda(std::string_view uda) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.second == uda; });
}

std::vector<std::string> FieldTaxonomy::udas() const {
  std::set<std::string> out;
  for (const auto& [sds, uda] : entries_) out.insert(uda);
  return {out.begin(), out.end()};
}

std::vector<std::string> FieldTaxonomy::sds_codes() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [sds, uda] : entries_) out.push_back(sds);
  return out;
}

namespace {

template <class T, class Key>
void sort_and_check_unique(std::vector<T>& items, Key key, const char* kind) {
  std::sort(items.begin(), items.end(),
            [&](const T& a, const T& b) { return key(a) < key(b); });
  auto dup = std::adjacent_find(items.begin(), items.end(),
                                [&](const T& a, const T& b) { return key(a) == key(b); });
  if (dup != items.end()) {
    throw Error(ErrorKind::DuplicateId, std::string(kind) + " " + key(*dup));
  }
}

template <class T, class Key>
std::optional<std::uint32_t> find_sorted(const std::vector<T>& items, std::string_view id, Key key) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [&](const T& item, std::string_view v) { return key(item) < v; });
  if (it == items.end() || key(*it) != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - items.begin());
}

const std::string& academic_key(const Academic& a) { return a.academic_id; }
const std::string& org_key(const Organization& o) { return o.org_id; }
const std::string& pub_key(const Publication& p) { return p.pub_id; }

void check_unique_list(std::vector<std::string>& ids, const Publication& pub, const char* what) {
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw Error(ErrorKind::DuplicateId, std::string(what) + " " + *dup + " repeated in publication " +
                                            pub.pub_id);
  }
}

}  // namespace

Corpus build_corpus(std::vector<Publication> publications, std::vector<Academic> academics,
                    std::vector<Organization> organizations, FieldTaxonomy taxonomy,
                    std::string domestic_country) {
  return build_corpus(CorpusInputs{std::move(publications), std::move(academics),
                                   std::move(organizations), std::move(taxonomy),
                                   std::move(domestic_country)});
}

Corpus build_corpus(CorpusInputs in) {
  if (in.domestic_country.empty()) {
    throw Error(ErrorKind::InvalidRecord, "empty domestic country");
  }
  Corpus c;
  c.domestic_country_ = std::move(in.domestic_country);
  c.taxonomy_ = std::move(in.taxonomy);

  sort_and_check_unique(in.organizations, org_key, "organization");
  for (const auto& o : in.organizations) {
    if (o.org_id.empty() || o.country_code.empty()) {
      throw Error(ErrorKind::InvalidRecord, "organization '" + o.org_id + "' has an empty field");
    }
  }
  c.organizations_ = std::move(in.organizations);
  c.domestic_.resize(c.organizations_.size());
  for (std::size_t i = 0; i < c.organizations_.size(); ++i) {
    c.domestic_[i] = c.organizations_[i].country_code == c.domestic_country_;
  }

  sort_and_check_unique(in.academics, academic_key, "academic");
  c.university_of_.reserve(in.academics.size());
  for (auto& a : in.academics) {
    const std::string* uda = c.taxonomy_.uda_of(a.sds);
    if (uda == nullptr) throw Error(ErrorKind::TaxonomyMiss, a.sds + " (academic " + a.academic_id + ")");
    a.uda = *uda;
    auto uni = find_sorted(c.organizations_, a.university_id, org_key);
    if (!uni) {
      throw Error(ErrorKind::DanglingReference, a.academic_id + " -> " + a.university_id);
    }
    const Organization& org = c.organizations_[*uni];
    if (!org.is_university || org.country_code != c.domestic_country_) {
      throw Error(ErrorKind::InvalidAffiliation,
                  a.academic_id + ": " + a.university_id + " is not a domestic university");
    }
    c.university_of_.push_back(*uni);
  }
  c.academics_ = std::move(in.academics);
  for (AcademicIndex i = 0; i < c.academics_.size(); ++i) {
    c.by_uda_[c.academics_[i].uda].push_back(i);
    c.by_sds_[c.academics_[i].sds].push_back(i);
  }

  sort_and_check_unique(in.publications, pub_key, "publication");
  const std::size_t n_pubs = in.publications.size();
  c.pub_author_offsets_.assign(1, 0);
  c.pub_org_offsets_.assign(1, 0);
  c.pub_author_offsets_.reserve(n_pubs + 1);
  c.pub_org_offsets_.reserve(n_pubs + 1);
  c.has_foreign_.assign(n_pubs, 0);
  std::vector<std::size_t> pubs_per_academic(c.academics_.size(), 0);

  for (std::size_t p = 0; p < n_pubs; ++p) {
    Publication& pub = in.publications[p];
    if (pub.n_authors < 1) {
      throw Error(ErrorKind::InvalidRecord, pub.pub_id + ": n_authors < 1");
    }
    if (static_cast<std::size_t>(pub.n_authors) < pub.academic_authors.size()) {
      throw Error(ErrorKind::InvalidRecord, pub.pub_id + ": n_authors below academic author count");
    }
    check_unique_list(pub.academic_authors, pub, "academic");
    check_unique_list(pub.org_addresses, pub, "organization");
    for (const auto& id : pub.academic_authors) {
      auto a = find_sorted(c.academics_, id, academic_key);
      if (!a) throw Error(ErrorKind::DanglingReference, pub.pub_id + " -> " + id);
      c.pub_authors_.push_back(*a);
      ++pubs_per_academic[*a];
    }
    for (const auto& id : pub.org_addresses) {
      auto o = find_sorted(c.organizations_, id, org_key);
      if (!o) throw Error(ErrorKind::DanglingReference, pub.pub_id + " -> " + id);
      c.pub_orgs_.push_back(*o);
      if (!c.domestic_[*o]) c.has_foreign_[p] = 1;
    }
    c.pub_author_offsets_.push_back(c.pub_authors_.size());
    c.pub_org_offsets_.push_back(c.pub_orgs_.size());
  }
  c.publications_ = std::move(in.publications);

  c.academic_pub_offsets_.assign(c.academics_.size() + 1, 0);
  for (std::size_t a = 0; a < c.academics_.size(); ++a) {
    c.academic_pub_offsets_[a + 1] = c.academic_pub_offsets_[a] + pubs_per_academic[a];
  }
  c.academic_pubs_.resize(c.pub_authors_.size());
  std::vector<std::size_t> cursor(c.academic_pub_offsets_.begin(), c.academic_pub_offsets_.end() - 1);
  for (PublicationIndex p = 0; p < n_pubs; ++p) {
    for (AcademicIndex a : c.authors_of(p)) c.academic_pubs_[cursor[a]++] = p;
  }
  return c;
}

std::optional<AcademicIndex> Corpus::find_academic(std::string_view id) const {
  return find_sorted(academics_, id, academic_key);
}

std::optional<PublicationIndex> Corpus::find_publication(std::string_view id) const {
  return find_sorted(publications_, id, pub_key);
}

std::optional<OrgIndex> Corpus::find_organization(std::string_view id) const {
  return find_sorted(organizations_, id, org_key);
}

std::span<const PublicationIndex> Corpus::publications_of(AcademicIndex a) const {
  return std::span(academic_pubs_).subspan(academic_pub_offsets_[a],
                                           academic_pub_offsets_[a + 1] - academic_pub_offsets_[a]);
}

std::vector<std::string> Corpus::publication_ids_of(std::string_view academic_id) const {
  auto a = find_academic(academic_id);
  if (!a) throw Error(ErrorKind::DanglingReference, std::string(academic_id));
  std::vector<std::string> out;
  for (PublicationIndex p : publications_of(*a)) out.push_back(publications_[p].pub_id);
  return out;
}

std::span<const AcademicIndex> Corpus::authors_of(PublicationIndex p) const {
  return std::span(pub_authors_).subspan(pub_author_offsets_[p],
                                         pub_author_offsets_[p + 1] - pub_author_offsets_[p]);
}

std::span<const OrgIndex> Corpus::addresses_of(PublicationIndex p) const {
  return std::span(pub_orgs_).subspan(pub_org_offsets_[p], pub_org_offsets_[p + 1] - pub_org_offsets_[p]);
}

std::span<const AcademicIndex> Corpus::academics_in_uda(std::string_view uda) const {
  auto it = by_uda_.find(uda);
  if (it == by_uda_.end()) return {};
  return it->second;
}

std::span<const AcademicIndex> Corpus::academics_in_sds(std::string_view sds) const {
  auto it = by_sds_.find(sds);
  if (it == by_sds_.end()) return {};
  return it->second;
}

std::vector<AcademicIndex> field_members(const Corpus& corpus, const FieldScope& scope,
                                         const SdsFilter* active_sds) {
  std::vector<AcademicIndex> members;
  switch (scope.level) {
    case FieldLevel::All:
      members.resize(corpus.academics().size());
      for (AcademicIndex i = 0; i < members.size(); ++i) members[i] = i;
      break;
    case FieldLevel::Uda: {
      if (!corpus.taxonomy().has_uda(scope.code)) throw Error(ErrorKind::UnknownField, scope.code);
      auto span = corpus.academics_in_uda(scope.code);
      members.assign(span.begin(), span.end());
      break;
    }
    case FieldLevel::Sds: {
      if (!corpus.taxonomy().has_sds(scope.code)) throw Error(ErrorKind::UnknownField, scope.code);
      auto span = corpus.academics_in_sds(scope.code);
      members.assign(span.begin(), span.end());
      break;
    }
  }
  if (active_sds != nullptr) {
    std::erase_if(members, [&](AcademicIndex a) { return !active_sds->contains(corpus.academic(a).sds); });
  }
  return members;
}

std::vector<PublicationIndex> union_publications(const Corpus& corpus,
                                                 std::span<const AcademicIndex> members) {
  std::vector<std::uint8_t> seen(corpus.publications().size(), 0);
  for (AcademicIndex a : members) {
    for (PublicationIndex p : corpus.publications_of(a)) seen[p] = 1;
  }
  std::vector<PublicationIndex> out;
  for (PublicationIndex p = 0; p < seen.size(); ++p) {
    if (seen[p]) out.push_back(p);
  }
  return out;
}

std::vector<std::string> productive_academics(const Corpus& corpus, const FieldScope& scope) {
  std::vector<std::string> out;
  for (AcademicIndex a : field_members(corpus, scope)) {
    if (!corpus.publications_of(a).empty()) out.push_back(corpus.academic(a).academic_id);
  }
  return out;
}

std::vector<std::string> collaborative_academics(const Corpus& corpus, const FieldScope& scope) {
  std::vector<std::string> out;
  for (AcademicIndex a : field_members(corpus, scope)) {
    auto pubs = corpus.publications_of(a);
    bool any = std::any_of(pubs.begin(), pubs.end(),
                           [&](PublicationIndex p) { return corpus.publication(p).n_authors >= 2; });
    if (any) out.push_back(corpus.academic(a).academic_id);
  }
  return out;
}

SdsFilter filter_active_fields(const Corpus& corpus, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::DomainError, "threshold must lie in [0, 1]");
  }
  SdsFilter kept;
  for (const auto& sds : corpus.taxonomy().sds_codes()) {
    auto members = corpus.academics_in_sds(sds);
    if (members.empty()) {
      if (threshold == 0.0) kept.insert(sds);
      continue;
    }
    auto productive = std::count_if(members.begin(), members.end(),
                                    [&](AcademicIndex a) { return !corpus.publications_of(a).empty(); });
    if (static_cast<double>(productive) >= threshold * static_cast<double>(members.size())) {
      kept.insert(sds);
    }
  }
  return kept;
}

}  // namespace copro
