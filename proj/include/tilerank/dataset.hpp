#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilerank/performance.hpp"
#include "tilerank/ranking.hpp"

namespace tilerank {

using SemanticLabel = std::string;
using DomainId = std::string;

/// A discrete distribution over opaque semantic labels (non-negative, summing
/// to one within 1e-9, renormalized like Performance).
class SemanticDistribution {
 public:
  explicit SemanticDistribution(std::map<SemanticLabel, double> mass);

  const std::map<SemanticLabel, double>& mass() const { return p_; }
  double p(const SemanticLabel& label) const;

  bool operator==(const SemanticDistribution&) const = default;

 private:
  std::map<SemanticLabel, double> p_;
};

/// One domain: its category, semantic-label distribution, the per-entity
/// performances, and (optionally) per-entity per-label conditional outcome
/// distributions. Performances and conditionals are aligned with the owning
/// Dataset's entity list.
struct DomainRecord {
  DomainId id;
  std::string category;
  SemanticDistribution semantic;
  std::vector<Performance> performances;
  std::vector<std::map<SemanticLabel, Performance>> conditionals;  // empty = absent

  bool has_conditionals() const { return !conditionals.empty(); }
};

/// The evaluation corpus: a fixed entity set ranked on several domains, plus
/// optional externally supplied leaderboard rankings (overall and
/// per-category). Construction validates every invariant and reports all
/// violations at once.
class Dataset {
 public:
  Dataset(std::vector<EntityId> entities, std::vector<DomainRecord> domains,
          std::optional<Ranking> global_ranking = std::nullopt,
          std::map<std::string, Ranking> category_rankings = {});

  const std::vector<EntityId>& entities() const { return entities_; }
  const std::vector<DomainRecord>& domains() const { return domains_; }
  const std::optional<Ranking>& global_ranking() const { return global_ranking_; }
  const std::map<std::string, Ranking>& category_rankings() const {
    return category_rankings_;
  }

  bool has_domain(const DomainId& id) const;
  const DomainRecord& domain(const DomainId& id) const;  // throws UnknownDomain
  std::size_t entity_index(const EntityId& id) const;

  /// Sorted unique category names.
  std::vector<std::string> categories() const;
  /// Domain ids of a category, in dataset order.
  std::vector<DomainId> domains_in_category(const std::string& category) const;

 private:
  std::vector<EntityId> entities_;
  std::vector<DomainRecord> domains_;
  std::optional<Ranking> global_ranking_;
  std::map<std::string, Ranking> category_rankings_;
};

/// Normalized per-domain weights (summing to one over positive entries).
struct DomainWeights {
  std::map<DomainId, double> w;

  double at(const DomainId& id) const;
  double total() const;
};

Dataset load_dataset(const std::filesystem::path& path);
Dataset load_dataset_from_string(const std::string& text);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string dataset_to_string(const Dataset& dataset);

/// Leaderboard-style weighting: every category carries the same total weight,
/// split uniformly over its domains; the excluded domain (when given) gets 0.
/// With restrict_category, weights are uniform over that category's remaining
/// domains and 0 elsewhere.
DomainWeights cdnet_weights(const Dataset& dataset,
                            const std::optional<DomainId>& excluded,
                            const std::optional<std::string>& restrict_category
                            = std::nullopt);

/// -ln of the Bhattacharyya coefficient between two label distributions;
/// +infinity when the supports are disjoint.
double bhattacharyya_distance(const SemanticDistribution& p,
                              const SemanticDistribution& q);

/// Sub-dataset holding only the given category's domains.
Dataset filter_category(const Dataset& dataset, const std::string& category);

/// Deterministic pseudo-random dataset. Entities share a per-label base
/// behavior; each domain perturbs labels and behaviors by at most `drift`,
/// so drift = 0 yields identical performances on all domains. Generated
/// with std::mt19937_64 (seeded as given); uniform doubles are taken as
/// (x >> 11) * 2^-53, so output is bit-reproducible everywhere.
Dataset synth_dataset(int n_domains, int n_entities, int n_categories,
                      int n_labels, double drift, std::uint64_t seed);

/// FNV-1a 64-bit hash, hex encoded; used to fingerprint dataset files.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace tilerank
