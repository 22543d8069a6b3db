// Copyright 2026 The ci-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ciengine/commands.hpp"

#include <algorithm>
#include <cmath>

namespace ciengine {

namespace {

const Named<Diagram>& select_diagram(const Document& doc, const std::string& name) {
  if (doc.diagrams.empty()) fail(ErrorCode::ConfigError, "no diagram in the input");
  if (name.empty()) return doc.diagrams.front();
  for (const auto& d : doc.diagrams)
    if (d.name == name) return d;
  fail(ErrorCode::ConfigError, "no diagram named '" + name + "'");
}

// Everything except diagrams and other named payloads.
Document declarations(const Document& d) {
  Document out;
  out.systems = d.systems;
  out.procedures = d.procedures;
  out.maps = d.maps;
  out.backend = d.backend;
  return out;
}

bool is_procs(const Carrier& c) { return c.name().rfind("procs(", 0) == 0; }

bool uses_operational(const std::vector<SystemType>& ts) {
  return std::any_of(ts.begin(), ts.end(), [](const SystemType& t) { return t.abstract || is_procs(t.carrier); });
}

// Operational diagrams mention declared procedures, abstract systems or
// procedure-knowledge wires; everything else is read in F-S.
bool is_operational(const Diagram& d, const Document& doc) {
  const OperationalTheory th = doc.theory();
  if (uses_operational(d.inputs()) || uses_operational(d.outputs())) return true;
  for (const auto& b : d.boxes()) {
    if (th.find(b.name) || uses_operational(b.inputs) || uses_operational(b.outputs)) return true;
  }
  return false;
}

void add_prediction(Report& r, const std::string& key, const Prediction& p) {
  r.add("domain", p.domain.name());
  r.add("codomain", p.codomain.name());
  if (p.is_exact()) {
    r.add(key, *p.exact);
  } else {
    r.add(key, p.values);
  }
}

void add_map(Report& r, const std::string& key, const SubstochMap& m) {
  r.add(key + " domain", m.domain().name());
  r.add(key + " codomain", m.codomain().name());
  r.add(key, m.entries());
}

Matrix<Rational> rows_matrix(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  std::vector<Rational> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return Matrix<Rational>(rows.size(), cols, std::move(data));
}

void add_compatibility(Report& r, const CompatibilityResult& c) {
  r.add("local vertices", static_cast<std::int64_t>(c.vertex_count));
  r.add("member", c.member);
  if (c.member) {
    r.add("convex weights", c.weights);
  } else {
    r.add("separating hyperplane", c.hyperplane);
    r.add("bound", c.bound);
    r.add("violation", c.violation);
  }
  if (!c.chsh_form.empty()) {
    r.add("most violated CHSH form", c.chsh_form);
    r.add("CHSH form value", c.chsh_form_value);
  }
}

}  // namespace

bool is_failing_verdict(const std::string& verdict) { return verdict == "fail" || verdict == "not-preserved"; }

Report run_eval(const Document& doc, const std::string& diagram) {
  const auto& d = select_diagram(doc, diagram);
  Report r;
  r.command = "eval " + d.name;
  if (is_operational(d.value, doc)) {
    const PredictionMap pm = doc.prediction_map();
    r.add("semantics", std::string(pm.kind() == BackendKind::Quantum ? "operational (quantum)" : "operational (classical)"));
    if (causally_closed(d.value)) {
      add_prediction(r, "prediction", pm.predict_closed(d.value));
    } else {
      add_prediction(r, "process", pm.evaluate_process(d.value));
    }
    return r;
  }
  r.add("semantics", std::string("F-S"));
  const SubstochMap m = denote(d.value, doc.library());
  add_map(r, causally_closed(d.value) ? "prediction" : "denotation", m);
  return r;
}

Report run_equiv(const Document& a, const Document& b) {
  const auto& da = select_diagram(a, {});
  const auto& db = select_diagram(b, {});
  Document decl = declarations(a);
  decl.merge(declarations(b));
  Report r;
  r.command = "equiv " + da.name + " " + db.name;
  const bool identical = da.value.inputs() == db.value.inputs() && da.value.outputs() == db.value.outputs() &&
                         diagrams_equal(da.value, db.value);
  bool equivalent = false;
  if (is_operational(da.value, decl) || is_operational(db.value, decl)) {
    const PredictionMap pm = decl.prediction_map();
    r.add("semantics", std::string("operational"));
    if (causally_closed(da.value) && causally_closed(db.value)) {
      equivalent = op_equivalent(da.value, db.value, pm);
    } else {
      equivalent = processes_equal(da.value, db.value, pm);
    }
  } else {
    const Library lib = decl.library();
    r.add("semantics", std::string("F-S"));
    equivalent = inferentially_equivalent(da.value, db.value, lib);
    add_map(r, "denotation of " + da.name, denote(da.value, lib));
    add_map(r, "denotation of " + db.name, denote(db.value, lib));
  }
  r.add("diagrams identical", identical);
  r.add("equivalent", equivalent);
  r.verdict = equivalent ? "equivalent" : "inequivalent";
  return r;
}

Report run_normal_form(const Document& doc, const std::string& diagram) {
  const auto& d = select_diagram(doc, diagram);
  if (is_operational(d.value, doc)) fail(ErrorCode::ConfigError, "normal-form applies to F-S diagrams");
  const Library lib = doc.library();
  const NormalForm nf = normal_form(d.value, lib);
  Report r;
  r.command = "normal-form " + d.name;
  add_map(r, "S", nf.S);
  const Reconstruction rec = reconstruct(nf, d.name + "_S");
  const bool agrees = denote(rec.diagram, rec.library) == denote(d.value, lib);
  r.add("reconstruction agrees", agrees);
  r.add("reconstruction", "\n" + serialize_document(document_for(rec.diagram, d.name + "_normal_form", rec.library)));
  return r;
}

Report run_qnf(const Document& doc, const std::string& diagram) {
  const auto& d = select_diagram(doc, diagram);
  Report r;
  r.command = "qnf " + d.name;
  if (is_operational(d.value, doc)) {
    add_prediction(r, "quotient representative", quotient_representative(d.value, doc.prediction_map()));
    return r;
  }
  const QuotientNormalForm q = quotient_normal_form(d.value, doc.library());
  add_map(r, "sigma", q.sigma);
  r.add("weights", q.weights);
  return r;
}

Report run_verify_axioms(std::size_t max_carrier, std::uint64_t seed) {
  const AxiomReport a = verify_fs_axioms(max_carrier, seed);
  Report r;
  r.command = "verify-axioms --max-carrier " + std::to_string(max_carrier) + " --seed " + std::to_string(seed);
  for (const auto& law : a.axioms) {
    std::string s = std::to_string(law.checked) + " checked, " + std::to_string(law.failures) + " failed";
    if (!law.passed()) s += " (first: " + law.first_failure + ")";
    r.add(law.family, s);
  }
  r.add("skipped instances", static_cast<std::int64_t>(a.skipped));
  r.verdict = a.all_passed() ? "pass" : "fail";
  return r;
}

Report run_bell_check(const std::string& scenario, const Document& corr) {
  const Scenario s = parse_scenario(scenario);
  if (corr.correlations.empty()) fail(ErrorCode::ConfigError, "no correlation in the input");
  const auto& c = corr.correlations.front();
  if (!(c.value.scenario == s)) {
    fail(ErrorCode::WrongScenario, "correlation '" + c.name + "' is for " + c.value.scenario.describe() + ", not " +
                                       s.describe());
  }
  Report r;
  r.command = "bell-check --scenario " + s.describe() + " --corr " + c.name;
  r.add("table", c.value.p);
  if (s.is_chsh()) r.add("CHSH", chsh_value(c.value));
  if (s.kind == ScenarioKind::Bell) r.add("no-signalling", no_signalling_check(c.value));
  const CompatibilityResult res = fs_compatible(c.value);
  add_compatibility(r, res);
  r.verdict = res.member ? "member" : "nonmember";
  return r;
}

Report run_bell_check_quantum(const std::string& scenario, const Document& model) {
  const Scenario s = parse_scenario(scenario);
  if (model.bell_models.empty()) fail(ErrorCode::ConfigError, "no bell model in the input");
  const auto& m = model.bell_models.front();
  const BellBundle b = verdict_bundle(m.value, model.prediction_map());
  if (!(b.scenario == s)) {
    fail(ErrorCode::WrongScenario, "model '" + m.name + "' induces " + b.scenario.describe() + ", not " + s.describe());
  }
  Report r;
  r.command = "bell-check --scenario " + s.describe() + " --quantum " + m.name;
  r.add("table", b.table);
  if (b.has_chsh) r.add("CHSH", b.chsh);
  r.add("no-signalling", b.no_signalling);
  r.add("rationalized table", b.rationalized.p);
  r.add("rationalization denominator", static_cast<std::int64_t>(b.rationalized.denominator));
  add_compatibility(r, b.compat);
  r.verdict = b.compat.member ? "member" : "nonmember";
  return r;
}

Report run_simplex_embed(const Document& fragment, std::size_t lambda_max) {
  if (fragment.fragments.empty()) fail(ErrorCode::ConfigError, "no fragment in the input");
  const auto& f = fragment.fragments.front();
  const SimplexEmbedding e = simplex_embed(f.value, lambda_max);
  Report r;
  r.command = "simplex-embed --fragment " + f.name + " --lambda-max " + std::to_string(lambda_max);
  r.add("accessible dimension", static_cast<std::int64_t>(e.accessible_dim));
  r.add("state cone facets", static_cast<std::int64_t>(e.state_facets));
  r.add("effect cone facets", static_cast<std::int64_t>(e.effect_facets));
  if (e.verdict == EmbedVerdict::Infeasible) {
    r.add("witness", e.witness);
  } else {
    r.add("ontic states", static_cast<std::int64_t>(e.lambda));
    r.add("state vectors", rows_matrix(e.state_vectors, e.lambda));
    r.add("effect vectors", rows_matrix(e.effect_vectors, e.lambda));
    r.add("unit vector", e.unit_vector);
    r.add("pairings verified", verify_embedding(f.value, e));
  }
  r.verdict = verdict_name(e.verdict);
  return r;
}

Report run_rep_check(const Document& rep, const Document& diagrams, const Document* pairs) {
  if (rep.reps.empty()) fail(ErrorCode::ConfigError, "no rep in the input");
  if (diagrams.diagrams.empty()) fail(ErrorCode::ConfigError, "no diagram in the input");
  const auto& rp = rep.reps.front();
  Document decl = declarations(diagrams);
  decl.merge(declarations(rep));
  const PredictionMap pm = decl.prediction_map();
  rp.value.validate(pm.theory());
  Report r;
  r.command = "rep-check --rep " + rp.name;
  bool all_preserved = true;
  for (const auto& d : diagrams.diagrams) {
    const Reconstruction image = apply_representation(rp.value, d.value, pm);
    if (!causally_closed(d.value)) {
      r.add("image of " + d.name, std::string("open diagram; predictions not compared"));
      continue;
    }
    const Prediction op = pm.predict_closed(d.value);
    const SubstochMap fs = predict(image.diagram, image.library);
    bool same = op.values.rows() == fs.entries().rows() && op.values.cols() == fs.entries().cols();
    if (same && op.is_exact()) {
      same = *op.exact == fs.entries();
    } else if (same) {
      for (std::size_t i = 0; i < op.values.data().size(); ++i)
        same = same && std::abs(op.values.data()[i] - to_double(fs.entries().data()[i])) <= kEquivalenceTolerance;
    }
    all_preserved = all_preserved && same;
    r.add("prediction preserved for " + d.name, same);
  }
  r.verdict = all_preserved ? "preserved" : "not-preserved";
  if (pairs) {
    if (pairs->pair_lists.empty()) fail(ErrorCode::ConfigError, "no pairs in the pair file");
    const auto& list = pairs->pair_lists.front();
    std::vector<std::pair<Diagram, Diagram>> ds;
    for (const auto& [a, b] : list.value) {
      const Diagram* da = diagrams.find_diagram(a);
      const Diagram* db = diagrams.find_diagram(b);
      if (!da || !db) fail(ErrorCode::ConfigError, "pair " + a + " " + b + " names an unknown diagram");
      ds.emplace_back(*da, *db);
    }
    const LeibnizReport l = is_leibnizian(rp.value, ds, pm);
    r.add("pairs checked", static_cast<std::int64_t>(l.pairs_checked));
    r.add("leibnizian", l.leibnizian);
    if (!l.leibnizian) {
      const auto& [a, b] = list.value[l.first_failure];
      r.add("first distinguished pair", a + " " + b);
    }
    if (all_preserved) r.verdict = l.leibnizian ? "leibnizian" : "not-leibnizian";
  }
  return r;
}

}  // namespace ciengine
