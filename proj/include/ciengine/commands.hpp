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


#pragma once

#include <cstdint>
#include <string>

#include "ciengine/document.hpp"
#include "ciengine/report.hpp"

namespace ciengine {

// Engine operations behind the command-line subcommands. Each returns a
// Report; input problems surface as Error exceptions.

/// Empty `diagram` selects the first diagram of the document.
Report run_eval(const Document& doc, const std::string& diagram = {});
/// Compares the first diagram of each document.
Report run_equiv(const Document& a, const Document& b);
Report run_normal_form(const Document& doc, const std::string& diagram = {});
Report run_qnf(const Document& doc, const std::string& diagram = {});
Report run_verify_axioms(std::size_t max_carrier, std::uint64_t seed);
/// First correlation of `corr`; its scenario must match `scenario`.
Report run_bell_check(const std::string& scenario, const Document& corr);
/// First Bell model of `model`; the scenario it induces must match `scenario`.
Report run_bell_check_quantum(const std::string& scenario, const Document& model);
Report run_simplex_embed(const Document& fragment, std::size_t lambda_max);
/// Checks the first representation in `rep` on every diagram of `diagrams`;
/// with `pairs`, also Leibnizianity over its first pair list.
Report run_rep_check(const Document& rep, const Document& diagrams, const Document* pairs = nullptr);

/// Verdicts that make the command fail even without an expectation.
bool is_failing_verdict(const std::string& verdict);

}  // namespace ciengine
