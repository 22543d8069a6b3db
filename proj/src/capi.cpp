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


#include "ciengine/ciengine.h"

#include <chrono>
#include <cstring>
#include <new>
#include <string>

#include "ciengine/commands.hpp"

struct ci_document {
  ciengine::Document doc;
};

struct ci_report {
  ciengine::Report report;
  std::string human;
  std::string records;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_line = 0;
thread_local std::size_t g_column = 0;

void clear_error() {
  g_error.clear();
  g_line = 0;
  g_column = 0;
}

// Runs `f`, translating exceptions into status codes.
template <class F>
ci_status guarded(F&& f) {
  clear_error();
  try {
    f();
    return CI_OK;
  } catch (const ciengine::ParseError& e) {
    g_error = e.what();
    g_line = e.line();
    g_column = e.column();
    return CI_PARSE_ERROR;
  } catch (const ciengine::Error& e) {
    g_error = e.what();
    return static_cast<ci_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return CI_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_error = e.what();
    return CI_INTERNAL_ERROR;
  }
}

ci_status null_argument(const char* what) {
  clear_error();
  g_error = std::string("null argument: ") + what;
  return CI_INVALID_ARGUMENT;
}

template <class F>
ci_status timed_report(ci_report** out, F&& f) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    auto r = std::make_unique<ci_report>();
    r->report = f();
    r->report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r->human = r->report.human();
    r->records = r->report.records();
    *out = r.release();
  });
}

std::string opt(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* ci_version(void) { return "1.0.0"; }

const char* ci_status_name(ci_status status) {
  if (status == CI_OK) return "OK";
  if (status == CI_INTERNAL_ERROR) return "InternalError";
  return ciengine::error_code_name(static_cast<ciengine::ErrorCode>(status));
}

const char* ci_last_error(void) { return g_error.c_str(); }
size_t ci_last_error_line(void) { return g_line; }
size_t ci_last_error_column(void) { return g_column; }

ci_status ci_document_load(const char* path, const ci_document* context, ci_document** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto d = std::make_unique<ci_document>();
    d->doc = ciengine::load_document(path, context ? &context->doc : nullptr);
    *out = d.release();
  });
}

ci_status ci_document_parse(const char* text, size_t length, const ci_document* context, ci_document** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto d = std::make_unique<ci_document>();
    d->doc = ciengine::parse_document(std::string_view(text, length), context ? &context->doc : nullptr);
    *out = d.release();
  });
}

ci_status ci_document_merge(ci_document* into, const ci_document* other) {
  if (!into) return null_argument("into");
  if (!other) return null_argument("other");
  return guarded([&] {
    ciengine::Document merged = into->doc;
    merged.merge(other->doc);
    into->doc = std::move(merged);
  });
}

ci_status ci_document_serialize(const ci_document* doc, char** out) {
  if (!doc) return null_argument("doc");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const std::string s = ciengine::serialize_document(doc->doc);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

size_t ci_document_diagram_count(const ci_document* doc) { return doc ? doc->doc.diagrams.size() : 0; }

void ci_document_free(ci_document* doc) { delete doc; }
void ci_string_free(char* s) { delete[] s; }

ci_status ci_eval(const ci_document* doc, const char* diagram, ci_report** out) {
  if (!doc) return null_argument("doc");
  return timed_report(out, [&] { return ciengine::run_eval(doc->doc, opt(diagram)); });
}

ci_status ci_equiv(const ci_document* a, const ci_document* b, ci_report** out) {
  if (!a || !b) return null_argument("document");
  return timed_report(out, [&] { return ciengine::run_equiv(a->doc, b->doc); });
}

ci_status ci_normal_form(const ci_document* doc, const char* diagram, ci_report** out) {
  if (!doc) return null_argument("doc");
  return timed_report(out, [&] { return ciengine::run_normal_form(doc->doc, opt(diagram)); });
}

ci_status ci_qnf(const ci_document* doc, const char* diagram, ci_report** out) {
  if (!doc) return null_argument("doc");
  return timed_report(out, [&] { return ciengine::run_qnf(doc->doc, opt(diagram)); });
}

ci_status ci_verify_axioms(size_t max_carrier, uint64_t seed, ci_report** out) {
  return timed_report(out, [&] { return ciengine::run_verify_axioms(max_carrier, seed); });
}

ci_status ci_bell_check(const char* scenario, const ci_document* correlation, ci_report** out) {
  if (!scenario) return null_argument("scenario");
  if (!correlation) return null_argument("correlation");
  return timed_report(out, [&] { return ciengine::run_bell_check(scenario, correlation->doc); });
}

ci_status ci_bell_check_quantum(const char* scenario, const ci_document* model, ci_report** out) {
  if (!scenario) return null_argument("scenario");
  if (!model) return null_argument("model");
  return timed_report(out, [&] { return ciengine::run_bell_check_quantum(scenario, model->doc); });
}

ci_status ci_simplex_embed(const ci_document* fragment, size_t lambda_max, ci_report** out) {
  if (!fragment) return null_argument("fragment");
  return timed_report(out, [&] { return ciengine::run_simplex_embed(fragment->doc, lambda_max); });
}

ci_status ci_rep_check(const ci_document* rep, const ci_document* diagrams, const ci_document* pairs,
                       ci_report** out) {
  if (!rep) return null_argument("rep");
  if (!diagrams) return null_argument("diagrams");
  return timed_report(out, [&] {
    return ciengine::run_rep_check(rep->doc, diagrams->doc, pairs ? &pairs->doc : nullptr);
  });
}

const char* ci_report_text(const ci_report* report, ci_format format) {
  if (!report) return "";
  return format == CI_FORMAT_RECORDS ? report->records.c_str() : report->human.c_str();
}

const char* ci_report_verdict(const ci_report* report) { return report ? report->report.verdict.c_str() : ""; }

int ci_report_failed(const ci_report* report) {
  return report && ciengine::is_failing_verdict(report->report.verdict) ? 1 : 0;
}

double ci_report_seconds(const ci_report* report) { return report ? report->report.seconds : 0.0; }

void ci_report_free(ci_report* report) { delete report; }

}  // extern "C"
