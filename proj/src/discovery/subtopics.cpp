#include "modlab/discovery/subtopics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "modlab/error.hpp"

namespace modlab::discovery {

using nlohmann::json;

std::vector<ReasonDoc> build_reason_docs(const std::vector<annotation::WhowAnnotation>& annotations,
                                         Cell cell, const std::set<std::string>& stopwords,
                                         annotation::MotiveCounting mode, ParseProvider* provider) {
  std::vector<ReasonDoc> docs;
  for (const auto& a : annotations) {
    if (a.dialogue_act != cell.act || a.motives.empty()) continue;
    const bool member = mode == annotation::MotiveCounting::first_listed
                            ? a.motives.front() == cell.motive
                            : std::find(a.motives.begin(), a.motives.end(), cell.motive) != a.motives.end();
    if (!member || a.reason.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ReasonDoc d;
    d.source_location = a.location;
    d.original_reason = a.reason;
    d.source_cell = cell;
    d.reduced_phrase = reduce_reason(a.reason, provider);
    if (provider != nullptr) {
      std::string rules = reduce_reason_rules(first_sentence(a.reason));
      if (rules != d.reduced_phrase) d.fallback_phrase = std::move(rules);
    }
    d.tokens = content_tokens(d.reduced_phrase, stopwords);
    docs.push_back(std::move(d));
  }
  return docs;
}

// --- runs --------------------------------------------------------------------

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

bool better(const ClusterRun& a, const ClusterRun& b) {
  if (a.coherence.has_value() != b.coherence.has_value()) return a.coherence.has_value();
  if (a.coherence && *a.coherence != *b.coherence) return *a.coherence > *b.coherence;
  return a.k < b.k;
}

/// Relabels clusters by size (descending), ties by first document.
void canonicalise(ClusterRun& run) {
  std::vector<std::size_t> sizes(run.k, 0), first(run.k, run.assignments.size());
  for (std::size_t d = 0; d < run.assignments.size(); ++d) {
    const auto c = run.assignments[d];
    ++sizes[c];
    first[c] = std::min(first[c], d);
  }
  std::vector<std::size_t> order(run.k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sizes[a] != sizes[b] ? sizes[a] > sizes[b] : first[a] < first[b];
  });
  std::vector<std::size_t> rank(run.k);
  for (std::size_t r = 0; r < run.k; ++r) rank[order[r]] = r;
  for (auto& c : run.assignments) c = rank[c];
  run.cluster_sizes.assign(run.k, 0);
  for (std::size_t r = 0; r < run.k; ++r) run.cluster_sizes[r] = sizes[order[r]];
  if (run.centroids.size() == run.k) {
    Vectors reordered(run.k);
    for (std::size_t r = 0; r < run.k; ++r) reordered[r] = run.centroids[order[r]];
    run.centroids = std::move(reordered);
  }
}

}  // namespace

json to_json(const ClusterRun& r) {
  json cc = json::array();
  for (const auto& c : r.cluster_coherence) cc.push_back(optional_number(c));
  return {{"cell", to_string(r.source_cell)},
          {"k", r.k},
          {"reducer",
           {{"kind", to_string(r.reducer.kind)},
            {"n_neighbors", r.reducer.n_neighbors},
            {"min_dist", r.reducer.min_dist},
            {"target_dim", r.reducer.target_dim},
            {"n_epochs", r.reducer.n_epochs}}},
          {"seed", r.seed},
          {"coherence", optional_number(r.coherence)},
          {"cluster_coherence", cc},
          {"cluster_sizes", r.cluster_sizes},
          {"top_keywords", r.top_keywords},
          {"degenerate", r.degenerate},
          {"assignments", r.assignments},
          {"centroids", r.centroids}};
}

ClusterRun cluster_run_from_json(const json& j) {
  ClusterRun r;
  r.source_cell = cell_from_string(j.at("cell").get<std::string>());
  r.k = j.at("k").get<std::size_t>();
  const auto& red = j.at("reducer");
  r.reducer.kind = reducer_kind_from_string(red.at("kind").get<std::string>());
  r.reducer.n_neighbors = red.at("n_neighbors").get<std::size_t>();
  r.reducer.min_dist = red.at("min_dist").get<double>();
  r.reducer.target_dim = red.at("target_dim").get<std::size_t>();
  r.reducer.n_epochs = red.value("n_epochs", std::size_t{500});
  r.seed = j.at("seed").get<std::uint64_t>();
  r.coherence = number_or_null(j.at("coherence"));
  for (const auto& c : j.at("cluster_coherence")) r.cluster_coherence.push_back(number_or_null(c));
  r.cluster_sizes = j.at("cluster_sizes").get<std::vector<std::size_t>>();
  r.top_keywords = j.at("top_keywords").get<std::vector<std::vector<std::string>>>();
  r.degenerate = j.value("degenerate", false);
  r.assignments = j.value("assignments", std::vector<std::size_t>{});
  r.centroids = j.value("centroids", Vectors{});
  return r;
}

SubtopicResult propose_subtopics(Cell cell, const std::vector<ReasonDoc>& docs, Embedder& embedder,
                                 const SubtopicOptions& options) {
  if (options.k_min == 0 || options.k_min > options.k_max)
    throw ConfigError(fmt::format("invalid k range [{}, {}]", options.k_min, options.k_max));
  if (docs.size() < options.min_docs)
    throw DataError(fmt::format("insufficient data for clustering: {} has {} documents, need {}",
                                cell_title(cell), docs.size(), options.min_docs));
  if (options.seeds.empty() || options.reducers.empty())
    throw ConfigError("propose_subtopics needs at least one seed and one reducer");

  std::vector<std::vector<std::string>> doc_tokens;
  std::vector<std::string> texts;
  for (const auto& d : docs) {
    doc_tokens.push_back(d.tokens);
    std::string t;
    for (const auto& w : d.tokens) t += (t.empty() ? "" : " ") + w;
    texts.push_back(std::move(t));
  }
  const Embeddings emb = embedder.embed(texts);
  const std::size_t distinct = count_distinct(emb.vectors);

  SubtopicResult result;
  for (const auto& reducer : options.reducers) {
    for (const auto seed : options.seeds) {
      std::optional<Vectors> reduced;
      for (std::size_t k = options.k_min; k <= options.k_max; ++k) {
        ClusterRun run;
        run.source_cell = cell;
        run.k = k;
        run.reducer = reducer;
        run.seed = seed;
        run.degenerate = k > distinct;
        if (!run.degenerate) {
          if (!reduced) reduced = reduce_dim(emb.vectors, reducer, seed);
          try {
            KMeansResult km = cluster_kmeans(*reduced, k, seed, {300, options.n_init});
            run.assignments = std::move(km.assignments);
            run.centroids = std::move(km.centroids);
          } catch (const DataError&) {
            run.degenerate = true;
          }
        }
        if (run.degenerate) {
          run.assignments.assign(docs.size(), 0);
          run.centroids.clear();
        }
        canonicalise(run);
        const auto keywords =
            class_tfidf_keywords(doc_tokens, run.assignments, k, options.coherence_keywords);
        for (const auto& kw : keywords)
          run.top_keywords.emplace_back(
              kw.begin(), kw.begin() + static_cast<std::ptrdiff_t>(std::min(kw.size(), options.display_keywords)));
        const Coherence coh = score_coherence(doc_tokens, keywords, run.cluster_sizes, options.window);
        run.coherence = coh.score;
        run.cluster_coherence = coh.per_cluster;
        result.runs.push_back(std::move(run));
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.runs.size(); ++i)
    if (better(result.runs[i], result.runs[best])) best = i;
  result.best = result.runs[best];
  return result;
}

// --- decisions ---------------------------------------------------------------

namespace {

const std::set<std::string> kDecisionKinds = {"expand", "merge", "extend", "keep", "merge_to"};

std::string target_label(const ClusterDecision& d) { return d.merge_to ? *d.merge_to : d.label; }

}  // namespace

json to_json(const std::vector<ClusterDecision>& decisions) {
  json arr = json::array();
  for (const auto& d : decisions) {
    json j = {{"cell", to_string(d.cell)}, {"decision", d.decision}, {"label", d.label}};
    j["cluster_index"] = d.cluster_index ? json(*d.cluster_index) : json(nullptr);
    if (d.merge_to) j["merge_to"] = *d.merge_to;
    if (!d.definition.empty()) j["definition"] = d.definition;
    if (!d.examples.empty()) j["examples"] = d.examples;
    if (d.prompt_label) j["prompt_label"] = *d.prompt_label;
    if (!d.aliases.empty()) j["aliases"] = d.aliases;
    arr.push_back(std::move(j));
  }
  return {{"decisions", arr}};
}

std::vector<ClusterDecision> parse_decisions(const json& doc) {
  const json& arr = doc.is_object() ? doc.at("decisions") : doc;
  if (!arr.is_array()) throw ConfigError("decisions: expected an array");
  std::vector<ClusterDecision> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& j = arr[i];
    try {
      ClusterDecision d;
      d.cell = cell_from_string(j.at("cell").get<std::string>());
      if (j.contains("cluster_index") && !j["cluster_index"].is_null())
        d.cluster_index = j["cluster_index"].get<std::size_t>();
      d.decision = j.at("decision").get<std::string>();
      // "merge_to": "<label>" is accepted as shorthand.
      if (d.decision.rfind("merge_to:", 0) == 0) {
        d.merge_to = d.decision.substr(9);
        while (!d.merge_to->empty() && d.merge_to->front() == ' ') d.merge_to->erase(0, 1);
        d.decision = "merge_to";
      }
      if (!kDecisionKinds.count(d.decision))
        throw ConfigError("unknown decision '" + d.decision + "'");
      d.label = j.value("label", std::string{});
      if (j.contains("merge_to")) d.merge_to = j["merge_to"].get<std::string>();
      if (d.decision == "merge_to" && !d.merge_to) throw ConfigError("merge_to decision without a target label");
      d.definition = j.value("definition", std::string{});
      d.examples = j.value("examples", std::vector<std::string>{});
      if (j.contains("prompt_label")) d.prompt_label = j["prompt_label"].get<std::string>();
      d.aliases = j.value("aliases", std::vector<std::string>{});
      out.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("decisions[{}]: {}", i, e.what()));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("decisions[{}]: {}", i, e.what()));
    }
  }
  return out;
}

std::vector<ClusterDecision> load_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read decisions file " + path.string());
  try {
    return parse_decisions(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const std::vector<ClusterDecision>& reference_decisions() {
  static const std::vector<ClusterDecision> kDecisions = [] {
    using M = Motive;
    using A = DialogueAct;
    struct Row {
      Cell cell;
      std::optional<std::size_t> cluster;
      const char* decision;
      const char* strategy;  // registry id
      bool merge_to;
    };
    const std::vector<Row> rows = {
        {{M::informational, A::probing}, 0, "merge", "information_probing", false},
        {{M::informational, A::probing}, 1, "merge", "information_probing", false},
        {{M::informational, A::probing}, 2, "merge", "information_probing", false},
        {{M::informational, A::supplement}, 0, "expand", "opinion_sharing", false},
        {{M::informational, A::supplement}, 1, "expand", "information_sharing", false},
        {{M::informational, A::supplement}, 2, "expand", "echoing", false},
        {{M::social, A::supplement}, 3, "merge_to", "echoing", true},
        {{M::social, A::supplement}, 0, "expand", "experience_sharing", false},
        {{M::social, A::supplement}, 1, "merge", "acknowledgement", false},
        {{M::social, A::supplement}, 2, "merge", "acknowledgement", false},
        {{M::social, A::utility}, 0, "extend", "backchanneling", false},
        {{M::social, A::utility}, 1, "expand", "social_utility", false},
        {{M::informational, A::interpretation}, std::nullopt, "keep", "informational_interpretation", false},
        {{M::coordinative, A::instruction}, std::nullopt, "keep", "coordinative_instruction", false},
    };
    std::vector<ClusterDecision> out;
    std::set<std::string> described;
    for (const auto& row : rows) {
      const Strategy& s = *eslmod_taxonomy().find(row.strategy);
      ClusterDecision d;
      d.cell = row.cell;
      d.cluster_index = row.cluster;
      d.decision = row.decision;
      if (row.merge_to) d.merge_to = s.name;
      else d.label = s.name;
      if (described.insert(s.id).second) {
        d.definition = s.definition;
        d.examples = s.examples;
        d.prompt_label = s.prompt_label;
        d.aliases = s.aliases;
      }
      out.push_back(std::move(d));
    }
    return out;
  }();
  return kDecisions;
}

FinalizeResult finalize_taxonomy(const std::vector<ClusterRun>& runs,
                                 const std::vector<ClusterDecision>& decisions) {
  std::map<Cell, const ClusterRun*> by_cell;
  for (const auto& r : runs)
    if (!by_cell.emplace(r.source_cell, &r).second)
      throw ConfigError("more than one run supplied for " + cell_title(r.source_cell));

  std::set<std::pair<Cell, std::size_t>> covered;
  for (const auto& d : decisions) {
    if (!kDecisionKinds.count(d.decision)) throw ConfigError("unknown decision '" + d.decision + "'");
    if (target_label(d).empty())
      throw ConfigError("decision for " + cell_title(d.cell) + " has no label");
    const auto it = by_cell.find(d.cell);
    if (it == by_cell.end()) {
      if (d.cluster_index || d.decision != "keep")
        throw ConfigError(fmt::format("decision references unknown cluster: no run for {}",
                                      cell_title(d.cell)));
      continue;
    }
    if (!d.cluster_index)
      throw ConfigError("decision for clustered cell " + cell_title(d.cell) + " lacks cluster_index");
    if (*d.cluster_index >= it->second->k)
      throw ConfigError(fmt::format("decision references unknown cluster {} of {} (k = {})",
                                    *d.cluster_index, cell_title(d.cell), it->second->k));
    if (!covered.insert({d.cell, *d.cluster_index}).second)
      throw ConfigError(fmt::format("duplicate decision for cluster {} of {}", *d.cluster_index,
                                    cell_title(d.cell)));
  }
  for (const auto& r : runs)
    for (std::size_t c = 0; c < r.k; ++c) {
      const bool empty = c < r.cluster_sizes.size() && r.cluster_sizes[c] == 0;
      if (!empty && !covered.count({r.source_cell, c}))
        throw ConfigError(fmt::format("missing decision for cluster {} of {}", c, cell_title(r.source_cell)));
    }

  std::vector<std::string> order;
  std::map<std::string, std::vector<const ClusterDecision*>> groups;
  for (const auto& d : decisions) {
    const std::string label = target_label(d);
    if (!groups.count(label)) order.push_back(label);
    groups[label].push_back(&d);
  }

  FinalizeResult out;
  std::vector<Strategy> strategies;
  for (const auto& label : order) {
    const auto& members = groups[label];
    std::size_t primaries = 0;
    bool merged = members.size() > 1;
    Strategy s;
    s.name = label;
    s.id = slugify(label);
    for (const auto* d : members) {
      if (d->decision == "expand" || d->decision == "extend" || d->decision == "keep") ++primaries;
      if (d->decision == "merge" || d->decision == "merge_to") merged = true;
      if (s.definition.empty()) s.definition = d->definition;
      if (std::find(s.source_cells.begin(), s.source_cells.end(), d->cell) == s.source_cells.end())
        s.source_cells.push_back(d->cell);
      for (const auto& ex : d->examples)
        if (std::find(s.examples.begin(), s.examples.end(), ex) == s.examples.end()) s.examples.push_back(ex);
      if (!s.prompt_label && d->prompt_label) s.prompt_label = d->prompt_label;
      for (const auto& a : d->aliases)
        if (std::find(s.aliases.begin(), s.aliases.end(), a) == s.aliases.end()) s.aliases.push_back(a);
    }
    if (primaries > 1)
      throw ConfigError(fmt::format("duplicate label '{}': {} clusters claim it without a merge", label, primaries));
    if (s.definition.empty()) throw ConfigError("strategy '" + label + "' has no definition");
    s.decision = merged ? StrategyDecision::merge : decision_from_string(members.front()->decision);
    if (s.examples.empty()) out.warnings.push_back("strategy '" + label + "' has no examples");
    strategies.push_back(std::move(s));
  }
  try {
    out.registry = TaxonomyRegistry(std::move(strategies));
  } catch (const Error& e) {
    throw ConfigError(std::string("duplicate labels: ") + e.what());
  }
  if (out.registry.size() == 1)
    out.warnings.push_back("all clusters map to a single strategy '" + out.registry.strategies()[0].name + "'");
  return out;
}

std::string cluster_report_csv(const std::vector<ClusterRun>& runs,
                               const std::vector<ClusterDecision>& decisions) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::string out =
      "cell,reducer,n_neighbors,min_dist,target_dim,seed,k,coherence,cluster_index,cluster_coherence,"
      "top_keywords,size,decision,refined_label\n";
  for (const auto& r : runs) {
    for (std::size_t c = 0; c < r.k; ++c) {
      std::string decision, label;
      for (const auto& d : decisions)
        if (d.cell == r.source_cell && d.cluster_index == c) {
          decision = d.decision == "merge_to" ? "merge to " + target_label(d) : d.decision;
          label = target_label(d);
        }
      std::string keywords;
      if (c < r.top_keywords.size())
        for (const auto& w : r.top_keywords[c]) keywords += (keywords.empty() ? "" : ", ") + w;
      const auto cc = c < r.cluster_coherence.size() ? r.cluster_coherence[c] : std::nullopt;
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.source_cell),
                         to_string(r.reducer.kind), r.reducer.n_neighbors, r.reducer.min_dist,
                         r.reducer.target_dim, r.seed, r.k,
                         r.coherence ? fmt::format("{:.3f}", *r.coherence) : "n/a", c,
                         cc ? fmt::format("{:.3f}", *cc) : "n/a", quote(keywords),
                         c < r.cluster_sizes.size() ? r.cluster_sizes[c] : 0, decision, quote(label));
    }
  }
  return out;
}

}  // namespace modlab::discovery
