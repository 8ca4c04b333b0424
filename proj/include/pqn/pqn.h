/* C interface to the Poisson quasi-Nijenhuis verification library.
 *
 * All objects are opaque handles created and destroyed through this API;
 * functions return pqn_status and never throw across the boundary. Strings
 * returned through char** are owned by the caller and released with
 * pqn_string_free(). Error details for the calling thread are available via
 * pqn_last_error().
 */
#ifndef PQN_PQN_H
#define PQN_PQN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pqn_model pqn_model;
typedef struct pqn_report pqn_report;

typedef enum pqn_status {
  PQN_OK = 0,
  PQN_ERR_INVALID_ARG = 1,  /* bad parameter or unknown name */
  PQN_ERR_PARSE = 2,        /* expression or file syntax error */
  PQN_ERR_EVAL = 3,         /* numeric evaluation failure */
  PQN_ERR_REFUSED = 4,      /* operation declined (precondition not met) */
  PQN_ERR_SCHEMA = 5,       /* structure-file schema violation */
  PQN_ERR_INTERNAL = 6
} pqn_status;

const char* pqn_version(void);

/* Thread-local message describing the most recent failure. */
const char* pqn_last_error(void);

void pqn_string_free(char* s);

/* --- models ------------------------------------------------------------ */

/* name: "closed-toda" (n >= 3), "open-toda" (n >= 2), "v-class" (n ignored,
 * chart is R^6). potential: NULL/"V" formal, "exp", "1/x", "1/x^2", or an
 * expression in x. kmax < 0 selects the model default. */
pqn_status pqn_model_create(const char* name, int n, const char* potential,
                            int kmax, pqn_model** out);
pqn_status pqn_model_from_json(const char* json, int kmax, pqn_model** out);
pqn_status pqn_model_to_json(const pqn_model* model, char** json_out);
void pqn_model_destroy(pqn_model* model);

/* --- verification ------------------------------------------------------ */

/* Axiom report; force_pn != 0 runs the torsionless-pair check even when the
 * model carries a 3-form. */
pqn_status pqn_check(const pqn_model* model, int force_pn, pqn_report** out);

pqn_status pqn_involution(const pqn_model* model, int kmax, pqn_report** out);

pqn_status pqn_toda_suite(const pqn_model* model, int kmax, pqn_report** out);

/* omega_spec: "minus-Omega", "plus-Omega" or "zero". */
pqn_status pqn_twist(const pqn_model* model, const char* omega_spec,
                     pqn_report** out);
pqn_status pqn_untwist(const pqn_model* model, const char* omega_spec, int part,
                       pqn_report** out);

/* RK4 flow of H_k (k = hamiltonian index, usually 2); x0 of length 2n or NULL
 * for the default state; csv_out optional. */
pqn_status pqn_flow(const pqn_model* model, double dt, double t_end, int kmax,
                    int hamiltonian, const double* x0, size_t x0_len,
                    double tol, char** csv_out, pqn_report** out);

pqn_status pqn_oracle(const pqn_model* model, unsigned seed, int samples,
                      double h, double tol, pqn_report** out);

pqn_status pqn_verify_all(const pqn_model* model, int kmax, unsigned seed,
                          double tol, pqn_report** out);

/* --- reports ------------------------------------------------------------ */

int pqn_report_passed(const pqn_report* report);
/* as_json != 0 renders JSON (deterministic; timings only when with_timings),
 * otherwise indented text. */
pqn_status pqn_report_render(const pqn_report* report, int as_json,
                             int with_timings, char** out);
void pqn_report_destroy(pqn_report* report);

/* --- expressions --------------------------------------------------------- */

/* Parse + canonical re-print of a scalar expression. */
pqn_status pqn_expr_canonical(const char* text, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PQN_PQN_H */
