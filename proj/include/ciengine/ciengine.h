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


/* C interface of the ci-engine library. Every function returns a ci_status;
 * on failure ci_last_error() describes the problem for the calling thread.
 * Objects returned through out-parameters are owned by the caller and are
 * released with the matching *_free function. */

#ifndef CIENGINE_CIENGINE_H_
#define CIENGINE_CIENGINE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CIENGINE_BUILDING)
#define CIENGINE_API __declspec(dllexport)
#else
#define CIENGINE_API __declspec(dllimport)
#endif
#else
#define CIENGINE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ci_document ci_document;
typedef struct ci_report ci_report;

typedef enum ci_status {
  CI_OK = 0,
  CI_TYPE_MISMATCH = 1,
  CI_CYCLE_DETECTED = 2,
  CI_DANGLING_PORT = 3,
  CI_SIGNATURE_MISMATCH = 4,
  CI_DIMENSION_MISMATCH = 5,
  CI_CARRIER_MISMATCH = 6,
  CI_WEIGHT_ERROR = 7,
  CI_CAP_EXCEEDED = 8,
  CI_NOT_CAUSALLY_CLOSED = 9,
  CI_MISSING_XI = 10,
  CI_PAIR_NOT_EQUIVALENT = 11,
  CI_UNRESOLVED_PROCEDURE = 12,
  CI_PROPOSITION_ON_NONCLASSICAL = 13,
  CI_NOT_POSITIVE = 14,
  CI_WRONG_SCENARIO = 15,
  CI_DEGENERATE = 16,
  CI_CONFIG_ERROR = 17,
  CI_PARSE_ERROR = 18,
  CI_IO_ERROR = 19,
  CI_INVALID_ARGUMENT = 20,
  CI_INTERNAL_ERROR = 99
} ci_status;

typedef enum ci_format { CI_FORMAT_HUMAN = 0, CI_FORMAT_RECORDS = 1 } ci_format;

CIENGINE_API const char* ci_version(void);
CIENGINE_API const char* ci_status_name(ci_status status);

/* Message of the last failure on this thread ("" after success). */
CIENGINE_API const char* ci_last_error(void);
/* Location of the last CI_PARSE_ERROR on this thread, 0 when unknown. */
CIENGINE_API size_t ci_last_error_line(void);
CIENGINE_API size_t ci_last_error_column(void);

/* Declarations of `context` (may be NULL) are visible while parsing. */
CIENGINE_API ci_status ci_document_load(const char* path, const ci_document* context, ci_document** out);
CIENGINE_API ci_status ci_document_parse(const char* text, size_t length, const ci_document* context,
                                         ci_document** out);
CIENGINE_API ci_status ci_document_merge(ci_document* into, const ci_document* other);
/* Canonical text; release with ci_string_free. */
CIENGINE_API ci_status ci_document_serialize(const ci_document* doc, char** out);
CIENGINE_API size_t ci_document_diagram_count(const ci_document* doc);
CIENGINE_API void ci_document_free(ci_document* doc);
CIENGINE_API void ci_string_free(char* s);

/* `diagram` may be NULL to select the first diagram. */
CIENGINE_API ci_status ci_eval(const ci_document* doc, const char* diagram, ci_report** out);
CIENGINE_API ci_status ci_equiv(const ci_document* a, const ci_document* b, ci_report** out);
CIENGINE_API ci_status ci_normal_form(const ci_document* doc, const char* diagram, ci_report** out);
CIENGINE_API ci_status ci_qnf(const ci_document* doc, const char* diagram, ci_report** out);
CIENGINE_API ci_status ci_verify_axioms(size_t max_carrier, uint64_t seed, ci_report** out);
CIENGINE_API ci_status ci_bell_check(const char* scenario, const ci_document* correlation, ci_report** out);
CIENGINE_API ci_status ci_bell_check_quantum(const char* scenario, const ci_document* model, ci_report** out);
CIENGINE_API ci_status ci_simplex_embed(const ci_document* fragment, size_t lambda_max, ci_report** out);
/* `pairs` may be NULL. */
CIENGINE_API ci_status ci_rep_check(const ci_document* rep, const ci_document* diagrams, const ci_document* pairs,
                                    ci_report** out);

/* Text stays valid until the report is freed. */
CIENGINE_API const char* ci_report_text(const ci_report* report, ci_format format);
/* "" when the command has no verdict. */
CIENGINE_API const char* ci_report_verdict(const ci_report* report);
/* Nonzero when the verdict is a failed self-check. */
CIENGINE_API int ci_report_failed(const ci_report* report);
CIENGINE_API double ci_report_seconds(const ci_report* report);
CIENGINE_API void ci_report_free(ci_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CIENGINE_CIENGINE_H_ */
