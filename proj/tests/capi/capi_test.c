/* Exercises the C API from plain C. */

#include <stdio.h>
#include <string.h>

#include "padrig.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const char* kDoc =
    "{\"rank\": 1, \"prime\": 7,"
    " \"points\": [{\"location\": \"0\", \"exponents\": [{\"value\": \"1/3\", \"block\": 1}]},"
    "              {\"location\": \"inf\", \"exponents\": [{\"value\": \"-1/3\", \"block\": 1}]}],"
    " \"assertions\": {\"irreducible\": true, \"overconvergent\": true}}";

int main(void) {
  padrig_document* doc = NULL;
  char* err = NULL;
  char *out = NULL, *diag = NULL;
  padrig_options opts;
  int64_t index = 0;
  size_t i;

  EXPECT(strlen(padrig_version()) > 0);
  EXPECT(padrig_document_parse(kDoc, strlen(kDoc), &doc, &err) == PADRIG_OK);
  EXPECT(err == NULL);
  EXPECT(padrig_document_rigidity_index(doc, &index, &err) == PADRIG_OK);
  EXPECT(index == 2);

  padrig_options_init(&opts);
  opts.json = 1;
  EXPECT(padrig_analyze(doc, &opts, &out, &diag) == 0);
  EXPECT(out != NULL && strstr(out, "\"verdict\": \"rigid-with-frobenius-structure\"") != NULL);
  padrig_string_free(out);
  padrig_string_free(diag);

  opts.point = "5";
  EXPECT(padrig_frobenius(doc, &opts, &out, &diag) == PADRIG_INPUT);
  EXPECT(diag != NULL && strstr(diag, "point not found") != NULL);
  padrig_string_free(out);
  padrig_string_free(diag);

  opts.point = "inf";
  opts.x_window = 8;
  opts.p_digits = 10;
  EXPECT(padrig_frobenius(doc, &opts, &out, &diag) == PADRIG_OK);
  EXPECT(out != NULL && strstr(out, "\"x_window\": 8") != NULL);
  padrig_string_free(out);
  padrig_string_free(diag);

  EXPECT(padrig_conditions(doc, &opts, &out, &diag) == PADRIG_OK);
  EXPECT(out != NULL && strstr(out, "\"q\": 7") != NULL);
  padrig_string_free(out);
  padrig_string_free(diag);
  padrig_document_free(doc);

  /* schema errors carry a path */
  doc = NULL;
  EXPECT(padrig_document_parse("{\"rank\": 1}", 11, &doc, &err) == PADRIG_INPUT);
  EXPECT(doc == NULL);
  EXPECT(err != NULL && strstr(err, "$.") != NULL);
  padrig_string_free(err);
  err = NULL;

  EXPECT(padrig_document_load("builtin:missing", &doc, &err) == PADRIG_INPUT);
  padrig_string_free(err);
  err = NULL;
  EXPECT(padrig_document_load(NULL, &doc, &err) == PADRIG_INPUT);
  padrig_string_free(err);
  err = NULL;
  EXPECT(padrig_analyze(NULL, &opts, &out, &diag) == PADRIG_INPUT);
  padrig_string_free(diag);

  EXPECT(padrig_builtin_count() == 6);
  for (i = 0; i < padrig_builtin_count(); ++i) {
    char path[64];
    snprintf(path, sizeof path, "builtin:%s", padrig_builtin_name(i));
    EXPECT(padrig_document_load(path, &doc, &err) == PADRIG_OK);
    padrig_document_free(doc);
  }
  EXPECT(padrig_builtin_name(padrig_builtin_count()) == NULL);

  /* invalid system: parses but fails validation */
  {
    const char* dup =
        "{\"rank\": 1, \"prime\": 5,"
        " \"points\": [{\"location\": \"0\", \"exponents\": [{\"value\": \"0\", \"block\": 1}]},"
        "              {\"location\": \"0\", \"exponents\": [{\"value\": \"0\", \"block\": 1}]}],"
        " \"assertions\": {\"irreducible\": true, \"overconvergent\": true}}";
    EXPECT(padrig_document_parse(dup, strlen(dup), &doc, &err) == PADRIG_OK);
    EXPECT(padrig_document_rigidity_index(doc, &index, &err) == PADRIG_INPUT);
    EXPECT(err != NULL && strstr(err, "duplicate") != NULL);
    padrig_string_free(err);
    padrig_document_free(doc);
  }

  if (failures == 0) printf("C API: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
