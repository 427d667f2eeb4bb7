#include "tilerank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tilerank {
namespace {

using nlohmann::json;

constexpr double kReconstructionTolerance = 1e-6;

bool valid_file_id(const std::string& id) {
  return !id.empty() && id != "." && id != ".." &&
         id.find('/') == std::string::npos;
}

std::string join_violations(const std::vector<std::string>& violations) {
  std::ostringstream out;
  out << violations.size() << " violation(s):";
  for (const auto& v : violations) out << "\n  - " << v;
  return out.str();
}

void append_entity_check(std::vector<std::string>& violations,
                         const std::vector<EntityId>& entities) {
  if (entities.empty()) {
    violations.push_back("entity list is empty");
    return;
  }
  std::set<EntityId> seen;
  for (const auto& e : entities) {
    if (!valid_file_id(e)) {
      violations.push_back("entity id '" + e + "' is empty or not file-safe");
    }
    if (!seen.insert(e).second) {
      violations.push_back("duplicate entity id '" + e + "'");
    }
  }
}

void append_ranking_check(std::vector<std::string>& violations,
                          const Ranking& ranking,
                          const std::vector<EntityId>& entities,
                          const std::string& what) {
  std::vector<EntityId> sorted = entities;
  std::sort(sorted.begin(), sorted.end());
  if (ranking.entities() != sorted) {
    violations.push_back(what + " does not cover exactly the dataset entities");
  }
}

}  // namespace

SemanticDistribution::SemanticDistribution(std::map<SemanticLabel, double> mass)
    : p_(std::move(mass)) {
  if (p_.empty()) {
    throw ValidationError("semantic distribution has no labels");
  }
  double sum = 0.0;
  for (const auto& [label, v] : p_) {
    if (label.empty()) {
      throw ValidationError("semantic distribution has an empty label");
    }
    if (v < 0.0 || std::isnan(v)) {
      throw ValidationError("semantic probability for '" + label +
                            "' is negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("semantic distribution sums to " +
                          std::to_string(sum) + ", expected 1 within 1e-9");
  }
  // Same bit-stability rule as Performance: skip the division when already
  // normalized to within 1e-12.
  if (std::abs(sum - 1.0) > 1e-12) {
    for (auto& [_, v] : p_) v /= sum;
  }
}

double SemanticDistribution::p(const SemanticLabel& label) const {
  auto it = p_.find(label);
  return it == p_.end() ? 0.0 : it->second;
}

Dataset::Dataset(std::vector<EntityId> entities,
                 std::vector<DomainRecord> domains,
                 std::optional<Ranking> global_ranking,
                 std::map<std::string, Ranking> category_rankings)
    : entities_(std::move(entities)),
      domains_(std::move(domains)),
      global_ranking_(std::move(global_ranking)),
      category_rankings_(std::move(category_rankings)) {
  std::vector<std::string> violations;
  append_entity_check(violations, entities_);

  std::set<DomainId> domain_ids;
  std::set<std::string> cats;
  for (const auto& d : domains_) {
    if (!valid_file_id(d.id)) {
      violations.push_back("domain id '" + d.id + "' is empty or not file-safe");
    }
    if (!domain_ids.insert(d.id).second) {
      violations.push_back("duplicate domain id '" + d.id + "'");
    }
    if (d.category.empty()) {
      violations.push_back("domain '" + d.id + "' has an empty category");
    }
    cats.insert(d.category);
    if (d.performances.size() != entities_.size()) {
      violations.push_back("domain '" + d.id + "' has " +
                           std::to_string(d.performances.size()) +
                           " performances for " +
                           std::to_string(entities_.size()) + " entities");
      continue;
    }
    if (!d.has_conditionals()) continue;
    if (d.conditionals.size() != entities_.size()) {
      violations.push_back("domain '" + d.id +
                           "' conditionals do not cover every entity");
      continue;
    }
    for (std::size_t e = 0; e < entities_.size(); ++e) {
      const auto& cond = d.conditionals[e];
      std::array<double, 4> reconstructed{0.0, 0.0, 0.0, 0.0};
      for (const auto& [label, mass] : d.semantic.mass()) {
        auto it = cond.find(label);
        if (it == cond.end()) {
          if (mass > 0.0) {
            violations.push_back("domain '" + d.id + "' entity '" +
                                 entities_[e] + "': missing conditional for label '" +
                                 label + "'");
            reconstructed[0] = std::numeric_limits<double>::quiet_NaN();
            break;
          }
          continue;
        }
        for (std::size_t c = 0; c < 4; ++c) {
          reconstructed[c] += mass * it->second.mass()[c];
        }
      }
      for (const auto& [label, _] : cond) {
        if (d.semantic.mass().find(label) == d.semantic.mass().end()) {
          violations.push_back("domain '" + d.id + "' entity '" + entities_[e] +
                               "': conditional for label '" + label +
                               "' absent from the semantic distribution");
        }
      }
      if (std::isnan(reconstructed[0])) continue;
      for (std::size_t c = 0; c < 4; ++c) {
        if (std::abs(reconstructed[c] - d.performances[e].mass()[c]) >
            kReconstructionTolerance) {
          violations.push_back(
              "domain '" + d.id + "' entity '" + entities_[e] +
              "': conditionals do not reconstruct the performance (outcome " +
              std::string(outcome_name(kOutcomes[c])) + " off by " +
              std::to_string(std::abs(reconstructed[c] -
                                      d.performances[e].mass()[c])) +
              ")");
          break;
        }
      }
    }
  }

  if (global_ranking_) {
    append_ranking_check(violations, *global_ranking_, entities_,
                         "global ranking");
  }
  // Category rankings for categories without domains are tolerated: they
  // appear naturally when a dataset is filtered or a domain is left out.
  for (const auto& [cat, ranking] : category_rankings_) {
    append_ranking_check(violations, ranking, entities_,
                         "category ranking '" + cat + "'");
  }

  if (!violations.empty()) {
    throw ValidationError(join_violations(violations));
  }
}

bool Dataset::has_domain(const DomainId& id) const {
  for (const auto& d : domains_) {
    if (d.id == id) return true;
  }
  return false;
}

const DomainRecord& Dataset::domain(const DomainId& id) const {
  for (const auto& d : domains_) {
    if (d.id == id) return d;
  }
  throw UnknownDomain("unknown domain '" + id + "'");
}

std::size_t Dataset::entity_index(const EntityId& id) const {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (entities_[i] == id) return i;
  }
  throw InvalidParams("unknown entity '" + id + "'");
}

std::vector<std::string> Dataset::categories() const {
  std::set<std::string> cats;
  for (const auto& d : domains_) cats.insert(d.category);
  return {cats.begin(), cats.end()};
}

std::vector<DomainId> Dataset::domains_in_category(
    const std::string& category) const {
  std::vector<DomainId> ids;
  for (const auto& d : domains_) {
    if (d.category == category) ids.push_back(d.id);
  }
  return ids;
}

double DomainWeights::at(const DomainId& id) const {
  auto it = w.find(id);
  return it == w.end() ? 0.0 : it->second;
}

double DomainWeights::total() const {
  double sum = 0.0;
  for (const auto& [_, v] : w) sum += v;
  return sum;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(where + ": missing key '" + key + "'");
  }
  return *it;
}

Performance parse_performance(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw ParseError(where + ": expected an array of 4 outcome probabilities");
  }
  std::array<double, 4> mass{};
  for (std::size_t c = 0; c < 4; ++c) {
    if (!j[c].is_number()) {
      throw ParseError(where + ": outcome probabilities must be numbers");
    }
    mass[c] = j[c].get<double>();
  }
  return Performance(mass);
}

Ranking parse_ranking(const json& j, const std::string& where) {
  if (!j.is_object() || j.empty()) {
    throw ParseError(where + ": expected an entity -> rank object");
  }
  std::vector<std::pair<EntityId, double>> ranks;
  for (const auto& [entity, rank] : j.items()) {
    if (!rank.is_number()) {
      throw ParseError(where + ": rank of '" + entity + "' must be a number");
    }
    ranks.emplace_back(entity, rank.get<double>());
  }
  return Ranking::from_ranks(ranks);
}

json ranking_to_json(const Ranking& ranking) {
  json j = json::object();
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    j[ranking.entities()[i]] = ranking.rank(i);
  }
  return j;
}

}  // namespace

Dataset load_dataset_from_string(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dataset is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ParseError("dataset root must be an object");
  }

  const json& jentities = require(root, "entities", "dataset");
  if (!jentities.is_array()) {
    throw ParseError("'entities' must be an array of strings");
  }
  std::vector<EntityId> entities;
  for (const auto& e : jentities) {
    if (!e.is_string()) {
      throw ParseError("'entities' must be an array of strings");
    }
    entities.push_back(e.get<std::string>());
  }

  std::vector<std::string> violations;
  const json& jdomains = require(root, "domains", "dataset");
  if (!jdomains.is_array()) {
    throw ParseError("'domains' must be an array");
  }
  std::vector<DomainRecord> domains;
  for (std::size_t di = 0; di < jdomains.size(); ++di) {
    const json& jd = jdomains[di];
    const std::string where = "domain #" + std::to_string(di);
    if (!jd.is_object()) {
      throw ParseError(where + ": expected an object");
    }
    const json& jid = require(jd, "id", where);
    const json& jcat = require(jd, "category", where);
    if (!jid.is_string() || !jcat.is_string()) {
      throw ParseError(where + ": 'id' and 'category' must be strings");
    }
    const std::string id = jid.get<std::string>();

    const json& jsem = require(jd, "semantic", "domain '" + id + "'");
    if (!jsem.is_object()) {
      throw ParseError("domain '" + id + "': 'semantic' must be an object");
    }
    std::map<SemanticLabel, double> sem_mass;
    for (const auto& [label, v] : jsem.items()) {
      if (!v.is_number()) {
        throw ParseError("domain '" + id + "': semantic probability of '" +
                         label + "' must be a number");
      }
      sem_mass[label] = v.get<double>();
    }
    std::optional<SemanticDistribution> semantic;
    try {
      semantic.emplace(std::move(sem_mass));
    } catch (const Error& e) {
      violations.push_back("domain '" + id + "': " + e.what());
      semantic.emplace(std::map<SemanticLabel, double>{{"placeholder", 1.0}});
    }

    const json& jperf = require(jd, "performances", "domain '" + id + "'");
    if (!jperf.is_object()) {
      throw ParseError("domain '" + id + "': 'performances' must be an object");
    }
    std::vector<Performance> perfs;
    for (const auto& entity : entities) {
      auto it = jperf.find(entity);
      if (it == jperf.end()) {
        violations.push_back("domain '" + id +
                             "': no performance for entity '" + entity + "'");
        perfs.emplace_back(0.25, 0.25, 0.25, 0.25);
        continue;
      }
      const std::string where =
          "domain '" + id + "' performance of '" + entity + "'";
      try {
        perfs.push_back(parse_performance(*it, where));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        violations.push_back(where + ": " + e.what());
        perfs.emplace_back(0.25, 0.25, 0.25, 0.25);
      }
    }
    for (const auto& [entity, _] : jperf.items()) {
      if (std::find(entities.begin(), entities.end(), entity) ==
          entities.end()) {
        violations.push_back("domain '" + id +
                             "': performance for unknown entity '" + entity +
                             "'");
      }
    }

    std::vector<std::map<SemanticLabel, Performance>> conditionals;
    if (jd.contains("conditionals")) {
      const json& jcond = jd["conditionals"];
      if (!jcond.is_object()) {
        throw ParseError("domain '" + id + "': 'conditionals' must be an object");
      }
      for (const auto& entity : entities) {
        std::map<SemanticLabel, Performance> per_label;
        auto it = jcond.find(entity);
        if (it == jcond.end()) {
          violations.push_back("domain '" + id +
                               "': no conditionals for entity '" + entity + "'");
        } else if (!it->is_object()) {
          throw ParseError("domain '" + id + "': conditionals of '" + entity +
                           "' must be an object");
        } else {
          for (const auto& [label, jp] : it->items()) {
            const std::string where = "domain '" + id + "' conditional of '" +
                                      entity + "' for label '" + label + "'";
            try {
              per_label.emplace(label, parse_performance(jp, where));
            } catch (const ParseError&) {
              throw;
            } catch (const Error& e) {
              violations.push_back(where + ": " + e.what());
            }
          }
        }
        conditionals.push_back(std::move(per_label));
      }
    }

    domains.push_back(DomainRecord{id, jcat.get<std::string>(),
                                   std::move(*semantic), std::move(perfs),
                                   std::move(conditionals)});
  }

  std::optional<Ranking> global_ranking;
  if (root.contains("global_ranking") && !root["global_ranking"].is_null()) {
    global_ranking = parse_ranking(root["global_ranking"], "global_ranking");
  }
  std::map<std::string, Ranking> category_rankings;
  if (root.contains("category_rankings")) {
    const json& jcr = root["category_rankings"];
    if (!jcr.is_object()) {
      throw ParseError("'category_rankings' must be an object");
    }
    for (const auto& [cat, jr] : jcr.items()) {
      category_rankings.emplace(
          cat, parse_ranking(jr, "category ranking '" + cat + "'"));
    }
  }

  if (!violations.empty()) {
    throw ValidationError(join_violations(violations));
  }
  return Dataset(std::move(entities), std::move(domains),
                 std::move(global_ranking), std::move(category_rankings));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open dataset '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_dataset_from_string(buf.str());
}

std::string dataset_to_string(const Dataset& dataset) {
  json root;
  root["entities"] = dataset.entities();
  json jdomains = json::array();
  for (const auto& d : dataset.domains()) {
    json jd;
    jd["id"] = d.id;
    jd["category"] = d.category;
    json jsem = json::object();
    for (const auto& [label, v] : d.semantic.mass()) jsem[label] = v;
    jd["semantic"] = std::move(jsem);
    json jperf = json::object();
    for (std::size_t e = 0; e < dataset.entities().size(); ++e) {
      jperf[dataset.entities()[e]] = d.performances[e].mass();
    }
    jd["performances"] = std::move(jperf);
    if (d.has_conditionals()) {
      json jcond = json::object();
      for (std::size_t e = 0; e < dataset.entities().size(); ++e) {
        json per_label = json::object();
        for (const auto& [label, perf] : d.conditionals[e]) {
          per_label[label] = perf.mass();
        }
        jcond[dataset.entities()[e]] = std::move(per_label);
      }
      jd["conditionals"] = std::move(jcond);
    }
    jdomains.push_back(std::move(jd));
  }
  root["domains"] = std::move(jdomains);
  if (dataset.global_ranking()) {
    root["global_ranking"] = ranking_to_json(*dataset.global_ranking());
  }
  if (!dataset.category_rankings().empty()) {
    json jcr = json::object();
    for (const auto& [cat, ranking] : dataset.category_rankings()) {
      jcr[cat] = ranking_to_json(ranking);
    }
    root["category_rankings"] = std::move(jcr);
  }
  return root.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << dataset_to_string(dataset);
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// Weights, distances, filtering
// ---------------------------------------------------------------------------

DomainWeights cdnet_weights(const Dataset& dataset,
                            const std::optional<DomainId>& excluded,
                            const std::optional<std::string>& restrict_category) {
  if (excluded && !dataset.has_domain(*excluded)) {
    throw UnknownDomain("unknown domain '" + *excluded + "'");
  }
  auto survives = [&](const DomainRecord& d) {
    return !(excluded && d.id == *excluded);
  };

  DomainWeights out;
  for (const auto& d : dataset.domains()) out.w[d.id] = 0.0;

  if (restrict_category) {
    std::vector<const DomainRecord*> survivors;
    for (const auto& d : dataset.domains()) {
      if (d.category == *restrict_category && survives(d)) survivors.push_back(&d);
    }
    if (survivors.empty()) {
      throw EmptyCategory("no remaining domain in category '" +
                          *restrict_category + "'");
    }
    for (const auto* d : survivors) {
      out.w[d->id] = 1.0 / static_cast<double>(survivors.size());
    }
    return out;
  }

  std::map<std::string, std::vector<const DomainRecord*>> by_category;
  for (const auto& d : dataset.domains()) {
    if (survives(d)) by_category[d.category].push_back(&d);
  }
  if (by_category.empty()) {
    throw EmptyCategory("no domains remain after exclusion");
  }
  const double cat_weight = 1.0 / static_cast<double>(by_category.size());
  for (const auto& [_, members] : by_category) {
    for (const auto* d : members) {
      out.w[d->id] = cat_weight / static_cast<double>(members.size());
    }
  }
  return out;
}

double bhattacharyya_distance(const SemanticDistribution& p,
                              const SemanticDistribution& q) {
  double coeff = 0.0;
  for (const auto& [label, pv] : p.mass()) {
    const double qv = q.p(label);
    if (pv > 0.0 && qv > 0.0) coeff += std::sqrt(pv * qv);
  }
  if (coeff <= 0.0) return std::numeric_limits<double>::infinity();
  // The coefficient of a distribution with itself is its stored sum, which
  // may sit a few ulps above 1; clamp so the distance is never negative.
  return std::max(0.0, -std::log(coeff));
}

Dataset filter_category(const Dataset& dataset, const std::string& category) {
  std::vector<DomainRecord> kept;
  for (const auto& d : dataset.domains()) {
    if (d.category == category) kept.push_back(d);
  }
  if (kept.empty()) {
    throw UnknownCategory("no domain has category '" + category + "'");
  }
  return Dataset(dataset.entities(), std::move(kept), dataset.global_ranking(),
                 dataset.category_rankings());
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

namespace {

class U01 {
 public:
  explicit U01(std::uint64_t seed) : rng_(seed) {}
  // 53-bit uniform in [0,1); avoids std::uniform_real_distribution, whose
  // output is not pinned down by the standard.
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

std::string padded_name(const char* prefix, int index, int count) {
  int width = 1;
  for (int c = count; c >= 10; c /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

std::array<double, 4> normalize4(std::array<double, 4> v) {
  const double sum = v[0] + v[1] + v[2] + v[3];
  for (double& x : v) x /= sum;
  return v;
}

}  // namespace

Dataset synth_dataset(int n_domains, int n_entities, int n_categories,
                      int n_labels, double drift, std::uint64_t seed) {
  if (n_domains < 1 || n_entities < 1 || n_categories < 1 || n_labels < 1) {
    throw InvalidParams("synth_dataset counts must be at least 1");
  }
  if (n_categories > n_domains) {
    throw InvalidParams("synth_dataset needs at least one domain per category");
  }
  if (!(drift >= 0.0 && drift <= 1.0)) {
    throw InvalidParams("synth_dataset drift must lie in [0,1]");
  }

  U01 rng(seed);

  std::vector<EntityId> entities;
  for (int e = 0; e < n_entities; ++e) {
    entities.push_back(padded_name("e", e, n_entities));
  }
  std::vector<SemanticLabel> labels;
  for (int l = 0; l < n_labels; ++l) {
    labels.push_back(padded_name("l", l, n_labels));
  }

  // Shared base behavior: a label distribution plus per-entity per-label
  // conditional outcome distributions, all strictly positive.
  std::vector<double> base_semantic(n_labels);
  double sem_sum = 0.0;
  for (int l = 0; l < n_labels; ++l) {
    base_semantic[l] = 0.2 + rng.next();
    sem_sum += base_semantic[l];
  }
  for (double& v : base_semantic) v /= sem_sum;

  std::vector<std::vector<std::array<double, 4>>> base_cond(n_entities);
  for (int e = 0; e < n_entities; ++e) {
    base_cond[e].resize(n_labels);
    for (int l = 0; l < n_labels; ++l) {
      std::array<double, 4> raw{};
      for (double& c : raw) c = 0.05 + rng.next();
      base_cond[e][l] = normalize4(raw);
    }
  }

  std::vector<DomainRecord> domains;
  for (int d = 0; d < n_domains; ++d) {
    std::vector<double> sem(n_labels);
    double sum = 0.0;
    for (int l = 0; l < n_labels; ++l) {
      sem[l] = base_semantic[l] * (1.0 + drift * (rng.next() - 0.5));
      sum += sem[l];
    }
    for (double& v : sem) v /= sum;

    std::vector<std::map<SemanticLabel, Performance>> conditionals(n_entities);
    std::vector<Performance> performances;
    for (int e = 0; e < n_entities; ++e) {
      std::array<double, 4> perf{0.0, 0.0, 0.0, 0.0};
      for (int l = 0; l < n_labels; ++l) {
        std::array<double, 4> cond{};
        for (std::size_t c = 0; c < 4; ++c) {
          cond[c] = base_cond[e][l][c] * (1.0 + drift * (rng.next() - 0.5));
        }
        cond = normalize4(cond);
        for (std::size_t c = 0; c < 4; ++c) perf[c] += sem[l] * cond[c];
        conditionals[e].emplace(labels[l], Performance(cond));
      }
      performances.emplace_back(perf);
    }

    std::map<SemanticLabel, double> sem_mass;
    for (int l = 0; l < n_labels; ++l) sem_mass[labels[l]] = sem[l];
    domains.push_back(DomainRecord{
        padded_name("d", d, n_domains),
        padded_name("cat", d % n_categories, n_categories),
        SemanticDistribution(std::move(sem_mass)), std::move(performances),
        std::move(conditionals)});
  }

  // Leaderboard-style rankings: entities ordered by mean accuracy, overall
  // and per category.
  auto accuracy_ranking = [&](const std::vector<const DomainRecord*>& over) {
    std::vector<std::pair<EntityId, std::optional<double>>> acc;
    for (int e = 0; e < n_entities; ++e) {
      double sum_acc = 0.0;
      for (const auto* dom : over) {
        sum_acc += dom->performances[e].tn() + dom->performances[e].tp();
      }
      acc.emplace_back(entities[e], sum_acc / static_cast<double>(over.size()));
    }
    return rank_from_scores(ScoreVector(std::move(acc)), 0.0);
  };

  std::vector<const DomainRecord*> all;
  for (const auto& d : domains) all.push_back(&d);
  Ranking global = accuracy_ranking(all);

  std::map<std::string, Ranking> category_rankings;
  for (int c = 0; c < n_categories; ++c) {
    const std::string cat = padded_name("cat", c, n_categories);
    std::vector<const DomainRecord*> members;
    for (const auto& d : domains) {
      if (d.category == cat) members.push_back(&d);
    }
    category_rankings.emplace(cat, accuracy_ranking(members));
  }

  return Dataset(std::move(entities), std::move(domains), std::move(global),
                 std::move(category_rankings));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tilerank
