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


// ci-engine command-line front end.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ciengine/ciengine.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;

struct DocDeleter {
  void operator()(ci_document* d) const { ci_document_free(d); }
};
struct ReportDeleter {
  void operator()(ci_report* r) const { ci_report_free(r); }
};
using DocPtr = std::unique_ptr<ci_document, DocDeleter>;
using ReportPtr = std::unique_ptr<ci_report, ReportDeleter>;

// Carries a failed library status to main.
struct Failure {
  ci_status status;
  std::string message;
};

void check(ci_status s) {
  if (s != CI_OK) throw Failure{s, ci_last_error()};
}

DocPtr load(const std::string& path, const ci_document* context = nullptr) {
  ci_document* d = nullptr;
  check(ci_document_load(path.c_str(), context, &d));
  return DocPtr(d);
}

// Files are read in order; each sees the declarations of the earlier ones.
DocPtr load_all(const std::vector<std::string>& paths) {
  DocPtr merged = load(paths.at(0));
  for (std::size_t i = 1; i < paths.size(); ++i) {
    DocPtr next = load(paths[i], merged.get());
    check(ci_document_merge(merged.get(), next.get()));
  }
  return merged;
}

struct Options {
  std::string format = "human";
  std::string expect;
  std::uint64_t seed = 1;
  std::vector<std::string> files;
  std::string diagram;
  std::size_t max_carrier = 3;
  std::string scenario;
  std::string corr;
  std::string quantum;
  std::string fragment;
  std::size_t lambda_max = 16;
  std::string rep;
  std::string diagram_file;
  std::string pairs;
};

int emit(ci_report* raw, const Options& o) {
  ReportPtr r(raw);
  std::fputs(ci_report_text(r.get(), o.format == "records" ? CI_FORMAT_RECORDS : CI_FORMAT_HUMAN), stdout);
  const std::string verdict = ci_report_verdict(r.get());
  if (!o.expect.empty() && verdict != o.expect) {
    std::fprintf(stderr, "expected verdict '%s', got '%s'\n", o.expect.c_str(), verdict.c_str());
    return kExitNegative;
  }
  if (o.expect.empty() && ci_report_failed(r.get())) return kExitNegative;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal-inferential diagram engine and classical-realism no-go checker", "ci-engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"human", "records"}));
  app.add_option("--seed", o.seed, "Seed for randomized checks");
  app.add_option("--expect", o.expect, "Expected verdict; a different verdict exits with status 1");

  auto* eval = app.add_subcommand("eval", "Denote or predict a diagram");
  eval->add_option("files", o.files, "Input files, merged in order")->required();
  eval->add_option("--diagram", o.diagram, "Diagram name (default: the first)");

  auto* equiv = app.add_subcommand("equiv", "Inferential equivalence of two diagrams");
  equiv->add_option("files", o.files, "Two diagram files")->required()->expected(2);

  auto* nf = app.add_subcommand("normal-form", "F-S normal form and its reconstruction");
  nf->add_option("files", o.files, "Input files")->required();
  nf->add_option("--diagram", o.diagram, "Diagram name");

  auto* qnf = app.add_subcommand("qnf", "Quotiented normal form");
  qnf->add_option("files", o.files, "Input files")->required();
  qnf->add_option("--diagram", o.diagram, "Diagram name");

  auto* axioms = app.add_subcommand("verify-axioms", "Check the F-S rewrite rules exhaustively");
  axioms->add_option("--max-carrier", o.max_carrier, "Largest carrier size")->check(CLI::Range(1, 4));

  auto* bell = app.add_subcommand("bell-check", "F-S compatibility of a correlation");
  bell->add_option("--scenario", o.scenario, "chsh | bell NX NY NA NB | instrumental NX NA NB | "
                                             "prepare-measure NX NM NY NB | triangle NA NB NC [K]")
      ->required();
  auto* corr_opt = bell->add_option("--corr", o.corr, "Correlation file");
  auto* quantum_opt = bell->add_option("--quantum", o.quantum, "Quantum Bell model file");
  corr_opt->excludes(quantum_opt);

  auto* embed = app.add_subcommand("simplex-embed", "Simplex embeddability of a GPT fragment");
  embed->add_option("--fragment", o.fragment, "Fragment file")->required();
  embed->add_option("--lambda-max", o.lambda_max, "Largest ontic size tried")->check(CLI::Range(1, 16));

  auto* rep = app.add_subcommand("rep-check", "Check a classical realist representation");
  rep->add_option("--rep", o.rep, "Representation file")->required();
  rep->add_option("--diagram", o.diagram_file, "Diagram file")->required();
  rep->add_option("--leibniz-pairs", o.pairs, "File with pairs of equivalent diagrams");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    ci_report* r = nullptr;
    if (eval->parsed()) {
      DocPtr d = load_all(o.files);
      check(ci_eval(d.get(), o.diagram.empty() ? nullptr : o.diagram.c_str(), &r));
    } else if (equiv->parsed()) {
      DocPtr a = load(o.files.at(0));
      DocPtr b = load(o.files.at(1));
      check(ci_equiv(a.get(), b.get(), &r));
    } else if (nf->parsed() || qnf->parsed()) {
      DocPtr d = load_all(o.files);
      const char* name = o.diagram.empty() ? nullptr : o.diagram.c_str();
      check(nf->parsed() ? ci_normal_form(d.get(), name, &r) : ci_qnf(d.get(), name, &r));
    } else if (axioms->parsed()) {
      check(ci_verify_axioms(o.max_carrier, o.seed, &r));
    } else if (bell->parsed()) {
      if (o.corr.empty() == o.quantum.empty()) {
        std::fprintf(stderr, "error: bell-check needs exactly one of --corr and --quantum\n");
        return kExitInput;
      }
      if (!o.corr.empty()) {
        DocPtr c = load(o.corr);
        check(ci_bell_check(o.scenario.c_str(), c.get(), &r));
      } else {
        DocPtr m = load(o.quantum);
        check(ci_bell_check_quantum(o.scenario.c_str(), m.get(), &r));
      }
    } else if (embed->parsed()) {
      DocPtr f = load(o.fragment);
      check(ci_simplex_embed(f.get(), o.lambda_max, &r));
    } else if (rep->parsed()) {
      DocPtr d = load(o.diagram_file);
      DocPtr rp = load(o.rep, d.get());
      DocPtr p = o.pairs.empty() ? nullptr : load(o.pairs, d.get());
      check(ci_rep_check(rp.get(), d.get(), p.get(), &r));
    }
    return emit(r, o);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", ci_status_name(f.status), f.message.c_str());
    return kExitInput;
  }
}
