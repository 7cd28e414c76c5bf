#include "pnucleus/cli.hpp"

#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnucleus/global_decomp.hpp"
#include "pnucleus/oracle.hpp"
#include "pnucleus/parallel.hpp"
#include "pnucleus/quality_metrics.hpp"

namespace pnucleus {

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string input;
  double theta = 0.0;
  std::string backend = "exact";
  std::string hyper;
  std::string format = "json";
  int k_filter = 0;  // 0 = all
  int threads = default_threads();
};

struct McOpts {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;  // 0 = from epsilon/delta
  std::string estimator = "mc";
  bool keep_nonmaximal = false;
  unsigned max_oracle_edges = 20;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool needs_theta) {
  cmd->add_option("input", c.input, "edge list file, or '-' for stdin")
      ->required();
  auto* theta =
      cmd->add_option("--theta", c.theta, "probability threshold in (0,1]");
  if (needs_theta) theta->required();
  cmd->add_option("--backend", c.backend, "score backend: exact|hybrid")
      ->check(CLI::IsMember({"exact", "hybrid"}));
  cmd->add_option("--hyper", c.hyper,
                  "hybrid thresholds A,B,C,D (default 200,100,0.25,0.9)");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "tsv"}));
  cmd->add_option("--k", c.k_filter, "only emit nuclei at this level");
  cmd->add_option("--threads", c.threads, "worker count");
}

void add_mc(CLI::App* cmd, McOpts& m) {
  cmd->add_option("--epsilon", m.epsilon, "Monte-Carlo error bound");
  cmd->add_option("--delta", m.delta, "Monte-Carlo confidence parameter");
  cmd->add_option("--seed", m.seed, "base seed for world sampling");
  cmd->add_option("--samples", m.samples, "explicit sample count override");
  cmd->add_option("--estimator", m.estimator,
                  "tail source: mc (sampling) or oracle (exact, small inputs)")
      ->check(CLI::IsMember({"mc", "oracle"}));
  cmd->add_flag("--keep-nonmaximal", m.keep_nonmaximal,
                "also report raw accepted candidates");
  cmd->add_option("--max-oracle-edges", m.max_oracle_edges,
                  "edge budget for exact enumeration");
}

Hyperparams parse_hyper(const std::string& text) {
  Hyperparams hp;
  if (text.empty()) return hp;
  std::istringstream ss(text);
  std::string tok;
  std::vector<std::string> parts;
  while (std::getline(ss, tok, ',')) parts.push_back(tok);
  if (parts.size() != 4)
    throw DomainError("--hyper expects four comma-separated values A,B,C,D");
  try {
    hp.clt_min_extensions = std::stoi(parts[0]);
    hp.poisson_max_extensions = std::stoi(parts[1]);
    hp.poisson_prob_cap = std::stod(parts[2]);
    hp.binomial_variance_floor = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw DomainError("--hyper expects numeric values A,B,C,D");
  }
  hp.validate();
  return hp;
}

ProbabilisticGraph load_input(const std::string& path) {
  if (path == "-") return ProbabilisticGraph::load_edge_list(std::cin);
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return ProbabilisticGraph::load_edge_list(in);
}

SamplingConfig sampling_config(const McOpts& m) {
  SamplingConfig cfg;
  cfg.epsilon = m.epsilon;
  cfg.delta = m.delta;
  cfg.base_seed = m.seed;
  if (m.samples > 0) cfg.n_override = m.samples;
  return cfg;
}

json triangle_labels(const ProbabilisticGraph& g, const Triangle& t) {
  return json::array({g.label(t.u), g.label(t.v), g.label(t.w)});
}

json nucleus_json(const ProbabilisticGraph& g, const Nucleus& nuc) {
  json edges = json::array();
  for (EdgeId e : nuc.edges) {
    const ProbEdge& ed = g.edges()[e];
    edges.push_back(json::array({g.label(ed.u), g.label(ed.v), ed.p}));
  }
  json vertices = json::array();
  for (VertexId v : nuc.vertices) vertices.push_back(g.label(v));
  SubgraphView view(g, nuc.edges);
  json j;
  j["k"] = nuc.k;
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  j["pd"] = pd(view);
  j["pcc"] = pcc(view);
  return j;
}

void write_tsv_nucleus(std::ostream& out, const ProbabilisticGraph& g,
                       const Nucleus& nuc) {
  SubgraphView view(g, nuc.edges);
  out << "nucleus\t" << nuc.k << '\t' << pd(view) << '\t' << pcc(view) << '\t';
  for (std::size_t i = 0; i < nuc.vertices.size(); ++i)
    out << (i ? "," : "") << g.label(nuc.vertices[i]);
  out << '\t';
  for (std::size_t i = 0; i < nuc.edges.size(); ++i) {
    const ProbEdge& ed = g.edges()[nuc.edges[i]];
    out << (i ? ";" : "") << g.label(ed.u) << '-' << g.label(ed.v) << ':'
        << ed.p;
  }
  out << '\n';
}

struct Pipeline {
  // heap-held so the index's back-reference stays valid across moves
  std::unique_ptr<ProbabilisticGraph> graph;
  TriangleIndex idx;
  NucleusScores scores;
  Hyperparams hp;
  ScoreBackend backend = ScoreBackend::exact;
};

Pipeline run_scores(const CommonOpts& c) {
  Pipeline p;
  p.graph = std::make_unique<ProbabilisticGraph>(load_input(c.input));
  p.idx = TriangleIndex::build(*p.graph, c.threads);
  p.hp = parse_hyper(c.hyper);
  p.backend = c.backend == "hybrid" ? ScoreBackend::hybrid : ScoreBackend::exact;
  p.scores = compute_scores(p.idx, c.theta, p.hp, p.backend, c.threads);
  return p;
}

std::vector<Nucleus> local_nuclei(const Pipeline& p, int k_filter) {
  std::vector<Nucleus> all;
  int k_max = p.scores.max_score();
  for (int k = k_max; k >= 1; --k) {
    if (k_filter > 0 && k != k_filter) continue;
    for (Nucleus& nuc : assemble_nuclei(p.idx, p.scores, k))
      all.push_back(std::move(nuc));
  }
  return all;
}

json params_json(const CommonOpts& c, const Hyperparams& hp) {
  json j;
  j["backend"] = c.backend;
  j["hyper"] = {{"A", hp.clt_min_extensions},
                {"B", hp.poisson_max_extensions},
                {"C", hp.poisson_prob_cap},
                {"D", hp.binomial_variance_floor}};
  j["threads"] = c.threads;
  if (c.k_filter > 0) j["k"] = c.k_filter;
  return j;
}

void emit(std::ostream& out, const CommonOpts& c, const Pipeline& p,
          const char* mode, json params, const std::vector<Nucleus>& nuclei,
          const std::vector<Nucleus>* raw, bool with_scores) {
  if (c.format == "tsv") {
    out.precision(12);
    if (with_scores) {
      for (TriangleId t = 0; t < p.idx.triangle_count(); ++t) {
        if (p.scores.score[t] == kNoScore) continue;
        const Triangle& tr = p.idx.rec(t).tri;
        out << "score\t" << p.graph->label(tr.u) << '\t' << p.graph->label(tr.v)
            << '\t' << p.graph->label(tr.w) << '\t' << p.scores.score[t] << '\n';
      }
    }
    for (const Nucleus& nuc : nuclei) write_tsv_nucleus(out, *p.graph, nuc);
    return;
  }
  json j;
  j["mode"] = mode;
  j["theta"] = p.scores.theta;
  j["params"] = std::move(params);
  if (with_scores) {
    json scores = json::array();
    for (TriangleId t = 0; t < p.idx.triangle_count(); ++t) {
      if (p.scores.score[t] == kNoScore) continue;
      scores.push_back({{"triangle", triangle_labels(*p.graph, p.idx.rec(t).tri)},
                        {"nu", p.scores.score[t]}});
    }
    j["scores"] = std::move(scores);
  }
  json nj = json::array();
  for (const Nucleus& nuc : nuclei) nj.push_back(nucleus_json(*p.graph, nuc));
  j["nuclei"] = std::move(nj);
  if (raw) {
    json rj = json::array();
    for (const Nucleus& nuc : *raw) rj.push_back(nucleus_json(*p.graph, nuc));
    j["raw_accepted"] = std::move(rj);
  }
  out << j.dump(2) << '\n';
}

std::vector<Nucleus> filter_k(std::vector<Nucleus> nuclei, int k_filter) {
  if (k_filter <= 0) return nuclei;
  std::vector<Nucleus> out;
  for (Nucleus& nuc : nuclei)
    if (nuc.k == k_filter) out.push_back(std::move(nuc));
  return out;
}

int run_verify(const std::string& input, const std::string& mode_name, int k,
               const std::string& triangle_arg, unsigned max_edges,
               const std::string& format, std::ostream& out) {
  ProbabilisticGraph g = load_input(input);
  TriangleIndex idx = TriangleIndex::build(g);

  std::vector<VertexLabel> labels;
  {
    std::istringstream ss(triangle_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) labels.push_back(std::stoull(tok));
  }
  if (labels.size() != 3)
    throw DomainError("--triangle expects three comma-separated vertex labels");
  VertexId vs[3];
  for (int i = 0; i < 3; ++i) {
    auto v = g.vertex_of_label(labels[i]);
    if (!v) throw Error("unknown vertex label " + std::to_string(labels[i]));
    vs[i] = *v;
  }
  auto t = idx.find(vs[0], vs[1], vs[2]);
  if (!t) throw Error("vertices " + triangle_arg + " do not form a triangle");

  Mode mode;
  if (mode_name == "local") mode = Mode::local;
  else if (mode_name == "global") mode = Mode::global;
  else mode = Mode::weakly_global;

  OracleBudget budget{max_edges};
  double tail = exact_tail(idx, SubgraphView::full(g), *t, k, mode, budget);
  if (format == "json") {
    json j;
    j["mode"] = mode_name;
    j["k"] = k;
    j["triangle"] = labels;
    j["tail"] = tail;
    out << j.dump(2) << '\n';
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g\n", tail);
    out << buf;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"local, global, and weakly-global (3,4)-nucleus decomposition "
               "of probabilistic graphs"};
  app.require_subcommand(1);

  CommonOpts c_local, c_global, c_weak, c_metrics;
  McOpts m_global, m_weak;

  CLI::App* local = app.add_subcommand("local", "peeling decomposition");
  add_common(local, c_local, true);

  CLI::App* global =
      app.add_subcommand("global", "Monte-Carlo global decomposition");
  add_common(global, c_global, true);
  add_mc(global, m_global);

  CLI::App* weak = app.add_subcommand("weakly-global",
                                      "Monte-Carlo weakly-global decomposition");
  add_common(weak, c_weak, true);
  add_mc(weak, m_weak);

  CLI::App* metrics =
      app.add_subcommand("metrics", "density and clustering per nucleus");
  add_common(metrics, c_metrics, true);

  CLI::App* verify =
      app.add_subcommand("verify", "exact tail probability on small inputs");
  std::string v_input, v_mode, v_triangle, v_format = "plain";
  int v_k = 0;
  unsigned v_budget = 20;
  verify->add_option("input", v_input, "edge list file, or '-' for stdin")
      ->required();
  verify->add_option("--mode", v_mode, "local|global|weakly-global")
      ->required()
      ->check(CLI::IsMember({"local", "global", "weakly-global"}));
  verify->add_option("--k", v_k, "support level")->required();
  verify->add_option("--triangle", v_triangle, "three vertex labels u,v,w")
      ->required();
  verify->add_option("--max-oracle-edges", v_budget,
                     "edge budget for exact enumeration");
  verify->add_option("--format", v_format, "plain|json")
      ->check(CLI::IsMember({"plain", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;  // keep the documented {0,1,2} code space
  }

  try {
    if (local->parsed()) {
      Pipeline p = run_scores(c_local);
      emit(out, c_local, p, "local", params_json(c_local, p.hp),
           local_nuclei(p, c_local.k_filter), nullptr, true);
    } else if (global->parsed() || weak->parsed()) {
      const CommonOpts& c = global->parsed() ? c_global : c_weak;
      const McOpts& m = global->parsed() ? m_global : m_weak;
      Pipeline p = run_scores(c);
      SamplingConfig cfg = sampling_config(m);
      TailEstimator tails =
          m.estimator == "oracle"
              ? oracle_estimator(p.idx, OracleBudget{m.max_oracle_edges},
                                 c.threads)
              : mc_estimator(p.idx, cfg, c.threads);
      json params = params_json(c, p.hp);
      params["estimator"] = m.estimator;
      if (m.estimator == "mc") {
        params["epsilon"] = cfg.epsilon;
        params["delta"] = cfg.delta;
        params["samples"] = cfg.effective_samples();
        params["seed"] = cfg.base_seed;
      }
      if (global->parsed()) {
        GlobalOptions opts;
        opts.keep_nonmaximal = m.keep_nonmaximal;
        FgResult fg = fg_decompose(p.idx, p.scores, p.scores.theta, tails, opts);
        emit(out, c, p, "global", std::move(params),
             filter_k(std::move(fg.nuclei), c.k_filter),
             m.keep_nonmaximal ? &fg.raw_accepted : nullptr, true);
      } else {
        std::vector<Nucleus> wg =
            wg_decompose(p.idx, p.scores, p.scores.theta, tails);
        emit(out, c, p, "weakly-global", std::move(params),
             filter_k(std::move(wg), c.k_filter), nullptr, true);
      }
    } else if (metrics->parsed()) {
      Pipeline p = run_scores(c_metrics);
      emit(out, c_metrics, p, "metrics", params_json(c_metrics, p.hp),
           local_nuclei(p, c_metrics.k_filter), nullptr, false);
    } else if (verify->parsed()) {
      return run_verify(v_input, v_mode, v_k, v_triangle, v_budget, v_format,
                        out);
    }
    return 0;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pnucleus
