#ifndef CVDP_H
#define CVDP_H

/* C API for the cross-version defect prediction toolchain. All functions
 * return a cvdp_status; on failure cvdp_last_error() holds a message for the
 * calling thread. Handles are freed with their matching _free function. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvdp_status {
    CVDP_OK = 0,
    CVDP_ERR_INVALID_ARGUMENT = 1,
    CVDP_ERR_PARSE = 2,
    CVDP_ERR_IO = 3,
    CVDP_ERR_CONFIG = 4,
    CVDP_ERR_STATE = 5,
    CVDP_ERR_INTERNAL = 6,
    CVDP_ERR_PARTIAL = 7 /* some experiment cells failed; reports were written */
} cvdp_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* cvdp_last_error(void);

void cvdp_string_free(char* s);

/* ---- dependency graphs ---- */

typedef struct cvdp_graph cvdp_graph;

/* Parses every .java file under src_dir into a typed dependency network. */
cvdp_status cvdp_graph_extract(const char* src_dir, int workers, cvdp_graph** out);
/* Reads either a typed ("cdn v1") or a stripped ("digraph v1") graph file. */
cvdp_status cvdp_graph_read(const char* path, cvdp_graph** out);
cvdp_status cvdp_graph_write_cdn(const cvdp_graph* g, const char* path);
cvdp_status cvdp_graph_write_stripped(const cvdp_graph* g, const char* path);
size_t cvdp_graph_node_count(const cvdp_graph* g);
size_t cvdp_graph_edge_count(const cvdp_graph* g);
/* Newline-joined extraction warnings; owned by the handle. */
const char* cvdp_graph_diagnostics(const cvdp_graph* g);
void cvdp_graph_free(cvdp_graph* g);

/* ---- embeddings ---- */

typedef struct cvdp_embedding cvdp_embedding;

typedef struct cvdp_embed_options {
    const char* algorithm; /* "node2vec" | "line2" */
    int dim;
    uint64_t seed;
    int workers;
    int deterministic; /* nonzero pins training to one worker */
    /* node2vec */
    double p, q;
    int walks_per_node, walk_length, window, negatives, epochs;
    double learning_rate;
    /* line2 */
    int line_negatives;
    long long line_sample_count; /* -1 = 100 * |E| */
    double line_learning_rate;
} cvdp_embed_options;

cvdp_embed_options cvdp_embed_options_default(void);

cvdp_status cvdp_graph_embed(const cvdp_graph* g, const cvdp_embed_options* opts,
                             cvdp_embedding** out);
cvdp_status cvdp_embedding_read(const char* path, cvdp_embedding** out);
cvdp_status cvdp_embedding_write(const cvdp_embedding* e, const char* path);
size_t cvdp_embedding_node_count(const cvdp_embedding* e);
int cvdp_embedding_dim(const cvdp_embedding* e);
void cvdp_embedding_free(cvdp_embedding* e);

/* ---- cross-version alignment ---- */

typedef struct cvdp_align_options {
    const char* strategy; /* "knn" | "gns" | "random" */
    const char* method;   /* "orthogonal" | "linear" */
    long long n;          /* anchor count; -1 = all shared modules */
    int k;                /* neighborhood size for knn scoring */
    uint64_t seed;        /* random strategy only */
} cvdp_align_options;

cvdp_align_options cvdp_align_options_default(void);

/* Selects anchors between the two embeddings, fits the transform mapping the
 * new space onto the old one, and writes it. Graph files are required for the
 * gns strategy and ignored otherwise (pass NULL). out_anchors is optional. */
cvdp_status cvdp_align_files(const char* old_emb_path, const char* new_emb_path,
                             const char* old_graph_path, const char* new_graph_path,
                             const cvdp_align_options* opts, const char* out_transform,
                             const char* out_anchors);

/* ---- learning ---- */

typedef struct cvdp_forest_options {
    int n_trees;
    int max_features; /* -1 = ceil(sqrt(F)) */
    int min_samples_leaf;
    int max_depth; /* -1 = unlimited */
    uint64_t seed;
    int workers;
} cvdp_forest_options;

cvdp_forest_options cvdp_forest_options_default(void);

/* Trains a random forest on a name,label,features CSV and writes the model. */
cvdp_status cvdp_train_forest_csv(const char* features_csv, const cvdp_forest_options* opts,
                                  const char* model_path);
/* Writes a name,probability CSV; the feature columns must match the model. */
cvdp_status cvdp_predict_csv(const char* model_path, const char* features_csv,
                             const char* out_csv);

/* ---- experiments ---- */

typedef struct cvdp_pipeline_options {
    const char* workspace; /* artifact cache root; default "workspace" */
    const char* out_dir;   /* report directory; default <workspace>/reports */
    int workers;
    int deterministic;
    int has_seed_override;
    uint64_t seed_override; /* replaces evaluation.base_seed when set */
} cvdp_pipeline_options;

cvdp_pipeline_options cvdp_pipeline_options_default(void);

/* Runs every (pair, scenario, repetition) cell of the experiment config and
 * writes report.csv, summary.csv, comparisons.csv, anchor_sweep.csv and, on
 * failures, errors.csv. out_text (optional) receives a human-readable run
 * summary; free it with cvdp_string_free. Returns CVDP_ERR_PARTIAL when some
 * cells failed but reports were written. */
cvdp_status cvdp_pipeline_run(const char* config_path, const cvdp_pipeline_options* opts,
                              char** out_text);

/* Parses and checks an experiment config. out_report (optional) receives all
 * diagnostics, one per line. Returns CVDP_ERR_CONFIG when any are fatal. */
cvdp_status cvdp_validate_config(const char* config_path, char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* CVDP_H */
