/* qhom - exact-arithmetic homological algebra workbench.
 *
 * C interface to the shared library: opaque handles, status codes, and
 * JSON-encoded payloads. All strings returned through `char**` are allocated
 * by the library and must be released with qhom_string_free().
 */
#ifndef QHOM_H
#define QHOM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qhom_status {
    QHOM_OK = 0,
    QHOM_ERR_DOMAIN = 1,   /* violated mathematical precondition or failed check */
    QHOM_ERR_PARSE = 2,    /* malformed input or I/O failure */
    QHOM_ERR_ARGUMENT = 3  /* null handle or missing argument */
} qhom_status;

/* A session owns error state; it is not thread-safe, use one per thread. */
typedef struct qhom_session qhom_session;

/* An immutable chain complex. */
typedef struct qhom_complex qhom_complex;

qhom_session* qhom_session_new(void);
void qhom_session_free(qhom_session* s);

/* Message for the most recent failing call on this session; empty string if
 * none. The pointer stays valid until the next call on the session. */
const char* qhom_last_error(const qhom_session* s);

/* Runs one workbench command: "homology", "twisted", "bpl", "unipotent",
 * "torsion", "verify" or "examples". `args_json` is a JSON object whose keys
 * mirror the CLI flags ("base", "rep", "twist", "fiber", "perturbation",
 * "all", "name"). A JSON report is stored in *report_out on both success and
 * domain-level failure; the return value is the command's exit status. */
qhom_status qhom_run_job(qhom_session* s, const char* command, const char* args_json,
                         char** report_out);

/* Parses the chain-complex JSON format:
 * {"min_degree": int, "dims": [int], "differentials": {"n": [[rational]]}}. */
qhom_status qhom_complex_parse(qhom_session* s, const char* complex_json, qhom_complex** out);
void qhom_complex_free(qhom_complex* c);

/* Betti numbers and cycle representatives, as a JSON report. */
qhom_status qhom_complex_homology(qhom_session* s, const qhom_complex* c, char** report_out);

/* Alternating sum of dimensions. */
qhom_status qhom_complex_euler(qhom_session* s, const qhom_complex* c, long long* chi_out);

/* Checks d . d = 0; QHOM_OK when the complex is valid, QHOM_ERR_DOMAIN with
 * the failing degree in the report otherwise. */
qhom_status qhom_complex_verify(qhom_session* s, const qhom_complex* c, char** report_out);

void qhom_string_free(char* s);

const char* qhom_version(void);

#ifdef __cplusplus
}
#endif

#endif /* QHOM_H */
