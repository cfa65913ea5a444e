#pragma once

// In-memory co-authorship corpus: registry of academics and organizations,
// the field taxonomy, and the publication list, cross-validated and indexed.
//
// Ids are resolved once at build time. Every downstream module works on the
// dense indices (AcademicIndex, PublicationIndex, OrgIndex) exposed here.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copro {

using AcademicIndex = std::uint32_t;
using PublicationIndex = std::uint32_t;
using OrgIndex = std::uint32_t;

/// SDS -> UDA mapping. Each SDS belongs to exactly one UDA.
class FieldTaxonomy {
 public:
  /// Throws Error(DuplicateId) when the SDS is already present.
  void add(std::string sds, std::string uda);

  const std::string* uda_of(std::string_view sds) const;
  bool has_sds(std::string_view sds) const { return uda_of(sds) != nullptr; }
  bool has_uda(std::string_view uda) const;

  /// Sorted, unique.
  std::vector<std::string> udas() const;
  std::vector<std::string> sds_codes() const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const FieldTaxonomy&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

struct Organization {
  std::string org_id;
  std::string country_code;
  bool is_university = false;

  bool operator==(const Organization&) const = default;
};

struct Academic {
  std::string academic_id;
  std::string university_id;
  std::string sds;
  std::string uda;  // filled from the taxonomy by build_corpus

  bool operator==(const Academic&) const = default;
};

struct Publication {
  std::string pub_id;
  int year = 0;
  int n_authors = 1;
  std::vector<std::string> academic_authors;
  std::vector<std::string> org_addresses;

  bool operator==(const Publication&) const = default;
};

struct CorpusInputs {
  std::vector<Publication> publications;
  std::vector<Academic> academics;
  std::vector<Organization> organizations;
  FieldTaxonomy taxonomy;
  std::string domestic_country = "IT";
};

enum class FieldLevel { All, Uda, Sds };

/// A UDA, an SDS, or the whole corpus.
struct FieldScope {
  FieldLevel level = FieldLevel::All;
  std::string code;

  static FieldScope all() { return {}; }
  static FieldScope uda(std::string code) { return {FieldLevel::Uda, std::move(code)}; }
  static FieldScope sds(std::string code) { return {FieldLevel::Sds, std::move(code)}; }

  /// "Total" for the whole corpus, else the code.
  std::string label() const { return level == FieldLevel::All ? "Total" : code; }
};

class Corpus;

/// Validates cross references and builds the indexes. Publications are
/// stored sorted by id and their author/address lists sorted, so the result
/// does not depend on input order.
Corpus build_corpus(CorpusInputs inputs);
Corpus build_corpus(std::vector<Publication> publications, std::vector<Academic> academics,
                    std::vector<Organization> organizations, FieldTaxonomy taxonomy,
                    std::string domestic_country = "IT");

class Corpus {
 public:
  std::span<const Publication> publications() const { return publications_; }
  std::span<const Academic> academics() const { return academics_; }
  std::span<const Organization> organizations() const { return organizations_; }
  const FieldTaxonomy& taxonomy() const { return taxonomy_; }
  const std::string& domestic_country() const { return domestic_country_; }

  const Publication& publication(PublicationIndex i) const { return publications_[i]; }
  const Academic& academic(AcademicIndex i) const { return academics_[i]; }
  const Organization& organization(OrgIndex i) const { return organizations_[i]; }

  std::optional<AcademicIndex> find_academic(std::string_view id) const;
  std::optional<PublicationIndex> find_publication(std::string_view id) const;
  std::optional<OrgIndex> find_organization(std::string_view id) const;

  /// Author -> publication association (sorted by publication index).
  std::span<const PublicationIndex> publications_of(AcademicIndex a) const;
  std::vector<std::string> publication_ids_of(std::string_view academic_id) const;

  std::span<const AcademicIndex> authors_of(PublicationIndex p) const;
  std::span<const OrgIndex> addresses_of(PublicationIndex p) const;

  OrgIndex university_of(AcademicIndex a) const { return university_of_[a]; }
  bool is_domestic(OrgIndex o) const { return domestic_[o] != 0; }
  bool has_foreign_address(PublicationIndex p) const { return has_foreign_[p] != 0; }

  /// Registered academics of a field (sorted). Empty for a known code without members.
  std::span<const AcademicIndex> academics_in_uda(std::string_view uda) const;
  std::span<const AcademicIndex> academics_in_sds(std::string_view sds) const;

 private:
  friend Corpus build_corpus(CorpusInputs inputs);
  Corpus() = default;

  std::vector<Publication> publications_;
  std::vector<Academic> academics_;
  std::vector<Organization> organizations_;
  FieldTaxonomy taxonomy_;
  std::string domestic_country_;

  // CSR layouts.
  std::vector<std::size_t> pub_author_offsets_;
  std::vector<AcademicIndex> pub_authors_;
  std::vector<std::size_t> pub_org_offsets_;
  std::vector<OrgIndex> pub_orgs_;
  std::vector<std::size_t> academic_pub_offsets_;
  std::vector<PublicationIndex> academic_pubs_;

  std::vector<OrgIndex> university_of_;
  std::vector<std::uint8_t> domestic_;
  std::vector<std::uint8_t> has_foreign_;
  std::map<std::string, std::vector<AcademicIndex>, std::less<>> by_uda_;
  std::map<std::string, std::vector<AcademicIndex>, std::less<>> by_sds_;
};

/// Optional restriction of field members to a set of SDS codes.
using SdsFilter = std::set<std::string, std::less<>>;

/// Academics of a scope, optionally restricted to active SDSs. Sorted.
/// Throws Error(UnknownField) for a code absent from the taxonomy.
std::vector<AcademicIndex> field_members(const Corpus& corpus, const FieldScope& scope,
                                         const SdsFilter* active_sds = nullptr);

/// De-duplicated union of the publications authored by `members`, sorted.
std::vector<PublicationIndex> union_publications(const Corpus& corpus,
                                                 std::span<const AcademicIndex> members);

/// Academics of the scope with at least one publication; sorted ids.
std::vector<std::string> productive_academics(const Corpus& corpus, const FieldScope& scope);

/// Productive academics with at least one co-authored (n_authors >= 2) publication.
std::vector<std::string> collaborative_academics(const Corpus& corpus, const FieldScope& scope);

/// SDSs whose productive share of registered academics is >= threshold.
/// An SDS without registered academics survives only at threshold 0.
SdsFilter filter_active_fields(const Corpus& corpus, double threshold = 0.5);

}  // namespace copro
