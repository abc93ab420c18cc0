/* C interface for the asymclust clustering library.
 *
 * Maintained by hand; keep in sync with src/lib.rs.
 *
 * Conventions:
 *   - Fallible functions return an asymclust_status and write results
 *     through out-pointers; out-pointers are only written on ASYMCLUST_OK.
 *   - Every *_new has a matching *_free. Strings returned by the library
 *     are released with asymclust_string_free.
 *   - Handles are immutable and may be shared across threads; do not free
 *     a handle while another call is using it.
 */

#ifndef ASYMCLUST_H
#define ASYMCLUST_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asymclust_status {
  ASYMCLUST_OK = 0,
  ASYMCLUST_ERR_NULL_ARGUMENT = 1,
  ASYMCLUST_ERR_INVALID_UTF8 = 2,
  ASYMCLUST_ERR_INVALID_NETWORK = 3,
  ASYMCLUST_ERR_ASYMMETRIC_INPUT = 4,
  ASYMCLUST_ERR_UNKNOWN_METHOD = 5,
  ASYMCLUST_ERR_INDEX_OUT_OF_BOUNDS = 6,
  ASYMCLUST_ERR_INTERNAL = 7,
} asymclust_status;

/* Opaque handles. */
typedef struct AsymclustNetwork AsymclustNetwork;
typedef struct AsymclustUltrametric AsymclustUltrametric;
typedef struct AsymclustDendrogram AsymclustDendrogram;

/* Short static description of a status code; do not free. */
const char *asymclust_status_message(asymclust_status status);

/* Networks ---------------------------------------------------------- */

/* Build a network from n labels and a row-major n*n dissimilarity matrix
 * (zero diagonal, positive finite off-diagonal entries, no symmetry
 * required). */
asymclust_status asymclust_network_new(size_t n,
                                       const char *const *labels,
                                       const double *dissim,
                                       AsymclustNetwork **out);
void asymclust_network_free(AsymclustNetwork *net);
size_t asymclust_network_len(const AsymclustNetwork *net);

/* Entrywise max(a(i,j), a(j,i)); always symmetric. */
asymclust_status asymclust_network_symmetrize_max(const AsymclustNetwork *net,
                                                  AsymclustNetwork **out);
/* Writes 1 if exactly symmetric, 0 otherwise. */
asymclust_status asymclust_network_is_symmetric(const AsymclustNetwork *net,
                                                int *out);

/* Clustering -------------------------------------------------------- */

/* method: "reciprocal", "nonreciprocal", or "single-linkage". */
asymclust_status asymclust_cluster(const AsymclustNetwork *net,
                                   const char *method,
                                   AsymclustUltrametric **out);
void asymclust_ultrametric_free(AsymclustUltrametric *u);
size_t asymclust_ultrametric_len(const AsymclustUltrametric *u);
asymclust_status asymclust_ultrametric_value(const AsymclustUltrametric *u,
                                             size_t i,
                                             size_t j,
                                             double *out);
/* Newly allocated copy of node i's label. */
asymclust_status asymclust_ultrametric_label(const AsymclustUltrametric *u,
                                             size_t i,
                                             char **out);
/* {"labels": [...], "matrix": [[...]]} */
asymclust_status asymclust_ultrametric_to_json(const AsymclustUltrametric *u,
                                               char **out);

/* Dendrograms ------------------------------------------------------- */

asymclust_status asymclust_dendrogram_new(const AsymclustUltrametric *u,
                                          AsymclustDendrogram **out);
void asymclust_dendrogram_free(AsymclustDendrogram *d);
size_t asymclust_dendrogram_event_count(const AsymclustDendrogram *d);
asymclust_status asymclust_dendrogram_to_newick(const AsymclustDendrogram *d,
                                                char **out);
/* {"events": [...], "labels": [...]} */
asymclust_status asymclust_dendrogram_to_json(const AsymclustDendrogram *d,
                                              char **out);

/* Strings ------------------------------------------------------------ */

void asymclust_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* ASYMCLUST_H */
