#ifndef DEPCORE_H
#define DEPCORE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DEPCORE_BUILDING)
#    define DEPCORE_API __declspec(dllexport)
#  else
#    define DEPCORE_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define DEPCORE_API __attribute__((visibility("default")))
#else
#  define DEPCORE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum depcore_status {
  DEPCORE_OK = 0,
  DEPCORE_INVALID_ARGUMENT = 1,
  DEPCORE_CONFIG_ERROR = 2,
  DEPCORE_UNKNOWN_SUITE = 3,
  DEPCORE_INTERNAL_ERROR = 4
} depcore_status;

typedef enum depcore_engine {
  DEPCORE_ENGINE_CONCRETE = 0,
  DEPCORE_ENGINE_ABSTRACT = 1,
  DEPCORE_ENGINE_BOTH = 2
} depcore_engine;

typedef struct depcore_config depcore_config;
typedef struct depcore_report depcore_report;
typedef struct depcore_oracle_result depcore_oracle_result;

/* Message of the last failed call on this thread, or "". */
DEPCORE_API const char* depcore_last_error(void);

DEPCORE_API depcore_status depcore_config_create(depcore_config** out);
/* Overlays the keys of a JSON object; the config is unchanged on error. */
DEPCORE_API depcore_status depcore_config_load_json(depcore_config* config, const char* json_text);
DEPCORE_API depcore_status depcore_config_set_engine(depcore_config* config, depcore_engine engine);
DEPCORE_API void depcore_config_destroy(depcore_config* config);

/* Parse, type and resource errors are part of the report, not the status. */
DEPCORE_API depcore_status depcore_analyze_file(const depcore_config* config, const char* path,
                                                depcore_report** out);
DEPCORE_API depcore_status depcore_analyze_source(const depcore_config* config, const char* name,
                                                  const char* source, depcore_report** out);

/* Strings stay valid until the report is destroyed. */
DEPCORE_API const char* depcore_report_json(const depcore_report* report);
DEPCORE_API const char* depcore_report_text(const depcore_report* report);
/* deny_mode may be NULL. Returns 0, 1 or 2. */
DEPCORE_API int depcore_report_exit_status(const depcore_report* report, const char* deny_mode);
DEPCORE_API void depcore_report_destroy(depcore_report* report);

DEPCORE_API size_t depcore_oracle_suite_count(void);
DEPCORE_API const char* depcore_oracle_suite_name(size_t index);
DEPCORE_API depcore_status depcore_oracle_run(const char* suite, uint64_t cases, uint64_t seed,
                                              depcore_oracle_result** out);
DEPCORE_API uint64_t depcore_oracle_failures(const depcore_oracle_result* result);
/* Strings stay valid until the result is destroyed. */
DEPCORE_API const char* depcore_oracle_summary(const depcore_oracle_result* result);
DEPCORE_API const char* depcore_oracle_json(const depcore_oracle_result* result);
DEPCORE_API void depcore_oracle_destroy(depcore_oracle_result* result);

#ifdef __cplusplus
}
#endif

#endif
