#ifndef PADRIG_H
#define PADRIG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PADRIG_API
#else
#define PADRIG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum padrig_status {
  PADRIG_OK = 0,
  PADRIG_CONDITION = 1, /* hypothesis failure (strict mode) or selftest failure */
  PADRIG_INPUT = 2,     /* malformed document, schema or argument error */
  PADRIG_PRECISION = 3, /* precision exhausted, convergence not established, unverified gauge */
  PADRIG_INTERNAL = 4   /* allocation failure or unexpected exception */
} padrig_status;

typedef enum padrig_method { PADRIG_METHOD_EXP = 0, PADRIG_METHOD_LIFTING = 1 } padrig_method;

typedef struct padrig_options {
  int json;            /* nonzero: JSON report, otherwise aligned text */
  int strict;          /* nonzero: failed conditions give PADRIG_CONDITION */
  int64_t x_window;    /* 0: document or default */
  int64_t p_digits;    /* 0: document or default */
  padrig_method method;
  const char* point;   /* NULL: every singular point ("inf" or a rational) */
} padrig_options;

/* Opaque parsed document. */
typedef struct padrig_document padrig_document;

PADRIG_API const char* padrig_version(void);
PADRIG_API void padrig_options_init(padrig_options* opts);

/* Strings returned through char** are owned by the caller; release with padrig_string_free. */
PADRIG_API void padrig_string_free(char* s);

/* Parses JSON text (strict schema). On failure *error receives a path-qualified message. */
PADRIG_API padrig_status padrig_document_parse(const char* text, size_t length, padrig_document** out, char** error);
/* Reads a file, or a shipped example when path is "builtin:NAME". */
PADRIG_API padrig_status padrig_document_load(const char* path, padrig_document** out, char** error);
PADRIG_API void padrig_document_free(padrig_document* doc);

/* Structural queries. Invalid systems give PADRIG_INPUT. */
PADRIG_API padrig_status padrig_document_rigidity_index(const padrig_document* doc, int64_t* out, char** error);

/* Commands. The return value is the exit code; *output gets the report and
   *diagnostics any messages for stderr (either may be set to NULL when empty). */
PADRIG_API int padrig_analyze(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics);
PADRIG_API int padrig_conditions(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics);
PADRIG_API int padrig_frobenius(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics);
PADRIG_API int padrig_selftest(char** output);

PADRIG_API size_t padrig_builtin_count(void);
/* Name of the i-th shipped document, NULL when out of range. Static storage. */
PADRIG_API const char* padrig_builtin_name(size_t index);

#ifdef __cplusplus
}
#endif

#endif
