#include "reuseflow/engine.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace reuseflow {

namespace fs = std::filesystem;
using nlohmann::json;

ExecutorKind executor_kind_from_string(const std::string& text) {
  if (text == "sim") return ExecutorKind::Simulated;
  if (text == "process") return ExecutorKind::Process;
  throw std::invalid_argument("unknown executor '" + text + "' (expected sim or process)");
}

namespace {

NodeState state_from_string(const std::string& s) {
  if (s == "Load") return NodeState::Load;
  if (s == "Compute") return NodeState::Compute;
  if (s == "Prune") return NodeState::Prune;
  throw std::invalid_argument("unknown state '" + s + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void append_line(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path.string());
  out << line << "\n";
}

}  // namespace

std::string serialize_record(const IterationRecord& rec) {
  json states = json::object();
  for (const auto& [id, st] : rec.states) states[id] = to_string(st);
  json decisions = json::array();
  for (const auto& d : rec.decisions) {
    decisions.push_back({{"node", d.node},
                         {"C_ms", d.cumulative_ms},
                         {"l_ms", d.load_ms},
                         {"decision", d.decision},
                         {"used_bytes", d.used_bytes},
                         {"write_ms", d.write_ms}});
  }
  json events = json::array();
  for (const auto& e : rec.events) events.push_back({{"kind", e.kind}, {"node", e.node}});
  json doc = {{"iteration", rec.iteration},
              {"iteration_type", rec.iteration_type},
              {"policy", rec.policy},
              {"original", rec.original},
              {"signatures", rec.signatures},
              {"states", states},
              {"predicted_cost_ms", rec.predicted_cost_ms},
              {"realized_ms", rec.realized_ms},
              {"decisions", decisions},
              {"events", events},
              {"budget_bytes", rec.budget_bytes},
              {"storage_bytes", rec.storage_bytes},
              {"catalog_entries", rec.catalog_entries},
              {"budget_capped", rec.budget_capped},
              {"run_ms", rec.run_ms},
              {"mat_ms", rec.mat_ms},
              {"iteration_ms", rec.iteration_ms},
              {"cumulative_run_ms", rec.cumulative_run_ms},
              {"warnings", rec.warnings}};
  return doc.dump(2) + "\n";
}

IterationRecord parse_record(const std::string& text) {
  json doc = json::parse(text);
  IterationRecord rec;
  rec.iteration = doc.at("iteration").get<int>();
  rec.iteration_type = doc.at("iteration_type").get<std::string>();
  rec.policy = doc.at("policy").get<std::string>();
  rec.original = doc.at("original").get<std::vector<NodeId>>();
  rec.signatures = doc.at("signatures").get<std::map<NodeId, std::string>>();
  for (const auto& [id, st] : doc.at("states").items()) rec.states[id] = state_from_string(st.get<std::string>());
  rec.predicted_cost_ms = doc.at("predicted_cost_ms").get<Millis>();
  rec.realized_ms = doc.at("realized_ms").get<std::map<NodeId, Millis>>();
  for (const auto& d : doc.at("decisions")) {
    rec.decisions.push_back({d.at("node").get<std::string>(), d.at("C_ms").get<Millis>(), d.at("l_ms").get<Millis>(),
                             d.at("decision").get<std::string>(), d.at("used_bytes").get<std::int64_t>(),
                             d.at("write_ms").get<Millis>()});
  }
  for (const auto& e : doc.at("events"))
    rec.events.push_back({e.at("kind").get<std::string>(), e.at("node").get<std::string>()});
  rec.budget_bytes = doc.at("budget_bytes").get<std::int64_t>();
  rec.storage_bytes = doc.at("storage_bytes").get<std::int64_t>();
  rec.catalog_entries = doc.at("catalog_entries").get<std::size_t>();
  rec.budget_capped = doc.at("budget_capped").get<bool>();
  rec.run_ms = doc.at("run_ms").get<Millis>();
  rec.mat_ms = doc.at("mat_ms").get<Millis>();
  rec.iteration_ms = doc.at("iteration_ms").get<Millis>();
  rec.cumulative_run_ms = doc.at("cumulative_run_ms").get<Millis>();
  rec.warnings = doc.at("warnings").get<std::vector<std::string>>();
  return rec;
}

std::vector<IterationRecord> read_history(const fs::path& store) {
  std::vector<IterationRecord> out;
  fs::path dir = store / "history";
  if (!fs::exists(dir)) return out;
  for (int t = 0;; ++t) {
    fs::path p = dir / (std::to_string(t) + ".json");
    if (!fs::exists(p)) break;
    try {
      out.push_back(parse_record(read_text(p)));
    } catch (const std::exception& ex) {
      throw IntegrityError("corrupt history record " + p.string() + ": " + ex.what());
    }
  }
  return out;
}

StepResult load_node(const MaterializationCatalog& catalog, const Signature& sig, Executor& executor) {
  const CatalogEntry* entry = catalog.find(sig);
  if (!entry) throw IntegrityError("no materialization for signature " + sig.hex());
  if (!catalog.artifact_intact(*entry))
    throw IntegrityError("artifact " + catalog.artifact_path(sig).string() + " missing or size-mismatched");
  return executor.read_artifact(*entry, catalog.artifact_path(sig));
}

namespace {

struct Prepared {
  PlanPreview preview;
  std::vector<IterationRecord> history;
};

Prepared prepare(const Workflow& wf, const fs::path& store, MaterializationCatalog& catalog,
                 std::int64_t* budget_for_purge) {
  Prepared out;
  auto report = validate(wf.dag);
  if (!report.ok()) {
    std::string msg = "invalid workflow:";
    for (const auto& f : report.findings) msg += " " + f + ";";
    throw std::invalid_argument(msg);
  }
  out.history = read_history(store);
  PlanPreview& p = out.preview;
  p.iteration = static_cast<int>(out.history.size());

  WorkflowDag sliced = slice_to_outputs(wf.dag).with_iteration(p.iteration);
  for (const auto& [id, _] : wf.dag.nodes())
    if (!sliced.contains(id)) p.sliced_away.push_back(id);
  p.workflow = wf.restricted_to(sliced);

  std::set<Signature> prior;
  if (!out.history.empty())
    for (const auto& [_, hex] : out.history.back().signatures) prior.insert(Signature::from_hex(hex));
  p.changes = diff(prior, sliced);
  p.signatures = compute_signatures(sliced);

  if (budget_for_purge) {
    BudgetLedger unlimited(std::numeric_limits<std::int64_t>::max());
    for (auto& w : purge_stale(unlimited, p.changes, &catalog)) p.warnings.push_back(std::move(w));
    // A lowered budget evicts the oldest entries first.
    while (catalog.used_bytes() > *budget_for_purge) {
      const CatalogEntry* oldest = nullptr;
      for (const auto& [_, e] : catalog.entries())
        if (!oldest || e.created_iteration < oldest->created_iteration) oldest = &e;
      p.warnings.push_back("evicting " + oldest->node_id + " to fit the storage budget");
      catalog.erase(oldest->signature);
    }
  }

  auto resolved = resolve_load_times(sliced, p.workflow.costs, p.changes, catalog);
  p.metrics = std::move(resolved.metrics);
  for (auto& w : resolved.warnings) p.warnings.push_back(std::move(w));
  p.psp = reduce_to_psp(sliced, p.metrics, p.changes);
  p.plan.states = plan_from_projects(sliced, solve_psp(p.psp));
  p.plan.cost_ms = plan_cost(sliced, p.metrics, p.plan.states);
  auto violations = check_plan(sliced, p.changes, p.plan.states);
  if (!violations.empty())
    throw std::logic_error("planner produced an infeasible plan at node " + violations.front().node + ": " +
                           violations.front().message);
  return out;
}

}  // namespace

PlanPreview preview_plan(const Workflow& wf, const fs::path& store) {
  auto catalog = MaterializationCatalog::open(store);
  return prepare(wf, store, catalog, nullptr).preview;
}

IterationRecord run_iteration(const Workflow& wf, const fs::path& store, const RunOptions& options) {
  auto catalog = MaterializationCatalog::open(store);
  IterationRecord rec;
  rec.warnings = options.notes;
  for (const auto& orphan : catalog.collect_garbage())
    rec.warnings.push_back("removed orphan artifact " + orphan.filename().string());

  std::int64_t budget = options.budget_bytes;
  Prepared prep = prepare(wf, store, catalog, &budget);
  const PlanPreview& p = prep.preview;
  const WorkflowDag& dag = p.workflow.dag;
  const int t = p.iteration;
  for (const auto& w : p.warnings) rec.warnings.push_back(w);

  BudgetLedger ledger = BudgetLedger::from_catalog(catalog, budget);

  std::unique_ptr<Executor> executor;
  fs::path scratch = store / "scratch" / std::to_string(t);
  if (options.executor == ExecutorKind::Process)
    executor = std::make_unique<ProcessExecutor>(scratch);
  else
    executor = std::make_unique<SimulatedExecutor>();

  rec.iteration = t;
  rec.iteration_type = options.iteration_type;
  rec.policy = to_string(options.policy);
  rec.original.assign(p.changes.original.begin(), p.changes.original.end());
  for (const auto& [id, sig] : p.signatures) rec.signatures[id] = sig.hex();
  rec.states = p.plan.states;
  rec.predicted_cost_ms = p.plan.cost_ms;
  rec.budget_bytes = budget;

  // Non-pruned children still to complete, per computed node.
  std::map<NodeId, std::size_t> pending;
  for (const auto& [id, st] : rec.states) {
    if (st != NodeState::Compute) continue;
    std::size_t n = 0;
    for (const auto& ch : dag.children(id))
      if (rec.states.at(ch) != NodeState::Prune) ++n;
    pending[id] = n;
  }
  std::map<NodeId, std::size_t> completion_seq;
  std::map<NodeId, NodeOutput> outputs;
  const fs::path decision_log = store / "decisions.jsonl";

  auto decide = [&](const NodeId& id) {
    const auto& decl = dag.node(id);
    const Signature& sig = p.signatures.at(id);
    const NodeOutput& out = outputs.at(id);
    DecisionRecord d;
    d.node = id;
    d.cumulative_ms = cumulative_runtime(dag, rec.realized_ms, id);
    d.load_ms = load_ms_for_size(out.size_bytes, p.workflow.disk_read_bytes_per_ms);
    if (decl.kind == OperatorKind::Source) {
      // Reading a source again costs what computing it does.
      d.decision = to_string(MatDecision::Discard);
    } else if (catalog.find(sig)) {
      d.decision = "already_materialized";
    } else {
      auto decision = on_out_of_scope(id, sig, d.cumulative_ms, d.load_ms, out.size_bytes, ledger, options.policy);
      d.decision = to_string(decision);
      if (decision == MatDecision::Materialize) {
        d.write_ms = executor->write_artifact(out, d.load_ms, catalog.artifact_path(sig));
        catalog.insert({sig, id, out.size_bytes, d.write_ms, t});
        rec.mat_ms += d.write_ms;
      } else if (options.policy == MatPolicy::AlwaysMaterialize) {
        rec.budget_capped = true;
      }
    }
    d.used_bytes = ledger.used_bytes();
    if (ledger.used_bytes() > ledger.budget_bytes()) throw std::logic_error("storage budget exceeded");
    rec.events.push_back({"decide", id});
    append_line(decision_log, json({{"iteration", t},
                                    {"node", d.node},
                                    {"C_ms", d.cumulative_ms},
                                    {"l_ms", d.load_ms},
                                    {"decision", d.decision},
                                    {"used_bytes", d.used_bytes}})
                                  .dump());
    rec.decisions.push_back(std::move(d));
    outputs.erase(id);
  };

  for (const auto& id : topological_order(dag)) {
    const NodeState st = rec.states.at(id);
    if (st == NodeState::Prune) continue;
    const auto& decl = dag.node(id);
    NodeTask task{decl, p.workflow.costs.at(id), ""};
    if (auto c = p.workflow.commands.find(id); c != p.workflow.commands.end()) task.command = c->second;

    StepResult result;
    if (st == NodeState::Load && decl.kind != OperatorKind::Source) {
      const Signature& sig = p.changes.equivalent.at(id);
      if (options.on_load) options.on_load({t, id, sig, p.changes.is_original(id)});
      result = load_node(catalog, sig, *executor);
      rec.events.push_back({"load", id});
    } else {
      std::vector<NodeOutput> inputs;
      for (const auto& in : decl.inputs) inputs.push_back(outputs.at(in));
      result = executor->run(task, inputs);
      rec.events.push_back({st == NodeState::Load ? "load" : "compute", id});
    }
    rec.realized_ms[id] = result.elapsed_ms;
    outputs[id] = result.output;
    completion_seq[id] = completion_seq.size();

    std::vector<NodeId> ready;
    if (st == NodeState::Compute && pending.at(id) == 0) ready.push_back(id);
    for (const auto& parent : dag.parents(id)) {
      auto it = pending.find(parent);
      if (it != pending.end() && --it->second == 0) ready.push_back(parent);
    }
    std::sort(ready.begin(), ready.end(), [&](const NodeId& a, const NodeId& b) {
      return completion_seq.at(a) < completion_seq.at(b);
    });
    for (const auto& r : ready) decide(r);

    // Loaded nodes hold their output only until their consumers finish.
    for (const auto& parent : dag.parents(id))
      if (rec.states.at(parent) == NodeState::Load) {
        bool done = true;
        for (const auto& ch : dag.children(parent))
          if (rec.states.at(ch) != NodeState::Prune && !completion_seq.contains(ch)) done = false;
        if (done) outputs.erase(parent);
      }
  }

  if (catalog.used_bytes() != ledger.used_bytes())
    throw std::logic_error("catalog and ledger disagree on storage use");
  rec.storage_bytes = ledger.used_bytes();
  rec.catalog_entries = catalog.entries().size();
  for (const auto& [_, ms] : rec.realized_ms) rec.run_ms += ms;
  rec.iteration_ms = rec.run_ms + rec.mat_ms;
  rec.cumulative_run_ms = rec.iteration_ms + (prep.history.empty() ? 0 : prep.history.back().cumulative_run_ms);

  write_file_atomically(catalog.history_dir() / (std::to_string(t) + ".json"), serialize_record(rec));
  std::error_code ec;
  fs::remove_all(store / "scratch", ec);
  return rec;
}

IterationRecord run_iteration(const fs::path& workflow_file, const fs::path& store, const RunOptions& options) {
  return run_iteration(load_workflow(workflow_file), store, options);
}

}  // namespace reuseflow
