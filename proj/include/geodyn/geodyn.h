#ifndef GEODYN_H
#define GEODYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GEODYN_API __declspec(dllexport)
#else
#define GEODYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum geodyn_status {
  GEODYN_OK = 0,
  GEODYN_E_ARG = 1,       /* null pointer, bad enum value, buffer too small */
  GEODYN_E_CONTRACT = 2,  /* rejected by the engine: unknown or duplicate id, shape mismatch */
  GEODYN_E_BUDGET = 3,    /* exact oracle gave up */
  GEODYN_E_INTERNAL = 4
} geodyn_status;

typedef enum geodyn_mode {
  GEODYN_MODE_VC = 0,          /* vertex cover */
  GEODYN_MODE_MCM = 1,         /* bipartite matching */
  GEODYN_MODE_MCM_GENERAL = 2  /* matching on one-sided instances */
} geodyn_mode;

typedef enum geodyn_kind {
  GEODYN_KIND_DISK = 0,
  GEODYN_KIND_RECT = 1, /* 2-D boxes, rectangle cover engine */
  GEODYN_KIND_BOX = 2   /* d-boxes, assumed fat in vc mode */
} geodyn_kind;

typedef enum geodyn_side { GEODYN_SIDE_NONE = 0, GEODYN_SIDE_LEFT = 1, GEODYN_SIDE_RIGHT = 2 } geodyn_side;

typedef struct geodyn_config {
  int mode;      /* geodyn_mode */
  int kind;      /* geodyn_kind */
  int dim;       /* 2 for disks and rects */
  int bipartite; /* objects carry sides */
  double eps;
  double gamma;  /* vc only; <= 0 takes the preset value */
  double delta;  /* vc only; <= 0 takes the preset value */
  double phi;    /* fatness bound for boxes in vc mode */
  const char* preset; /* vc only: "disks", "fat", "rect", "bipartite"; NULL picks by kind */
  uint64_t seed;
} geodyn_config;

typedef struct geodyn_stats {
  uint64_t live;
  uint64_t updates;
  uint64_t rebuilds;
  uint64_t guess_switches; /* vc only */
  uint64_t b;              /* vc only: current guess */
  uint64_t b_min;          /* vc only */
  uint64_t phase_budget;
  uint64_t max_update_ops; /* vc only: store work of one update, rebuilds excluded */
  uint64_t total_update_ops; /* vc only */
  uint64_t kernel_size;    /* vc only, last rebuild */
  uint64_t mwu_iterations; /* vc only */
  uint64_t aug_paths;      /* matching modes */
  uint64_t candidate_repeats;
  uint64_t nonsimple_paths;
  uint64_t z_runs;         /* general matching */
  uint64_t relabels;       /* general matching */
} geodyn_stats;

typedef struct geodyn_engine geodyn_engine;

GEODYN_API void geodyn_config_default(geodyn_config* cfg);
GEODYN_API geodyn_status geodyn_create(const geodyn_config* cfg, geodyn_engine** out);
GEODYN_API void geodyn_destroy(geodyn_engine* e);

GEODYN_API geodyn_status geodyn_insert_disk(geodyn_engine* e, uint64_t id, int side, double x,
                                            double y, double r);
GEODYN_API geodyn_status geodyn_insert_box(geodyn_engine* e, uint64_t id, int side,
                                           const double* lo, const double* hi);
GEODYN_API geodyn_status geodyn_erase(geodyn_engine* e, uint64_t id);

/* Cover size in vc mode, number of matched pairs otherwise. */
GEODYN_API geodyn_status geodyn_solution_size(const geodyn_engine* e, uint64_t* out);
/* Sorted cover ids. *count receives the size even when cap is too small. */
GEODYN_API geodyn_status geodyn_cover(const geodyn_engine* e, uint64_t* ids, size_t cap,
                                      size_t* count);
/* Matched pairs as (a, b) with a < b, flattened; cap counts pairs. */
GEODYN_API geodyn_status geodyn_matching(const geodyn_engine* e, uint64_t* pairs, size_t cap,
                                         size_t* count);
GEODYN_API geodyn_status geodyn_get_stats(const geodyn_engine* e, geodyn_stats* out);

/* Checks the current solution against all live objects by pairwise tests. */
GEODYN_API geodyn_status geodyn_validate(const geodyn_engine* e, int* valid);
/* Exact optimum of the live instance (minimum cover or maximum matching). */
GEODYN_API geodyn_status geodyn_oracle(const geodyn_engine* e, uint64_t* opt);

GEODYN_API const char* geodyn_last_error(const geodyn_engine* e);
GEODYN_API const char* geodyn_status_name(geodyn_status s);

#ifdef __cplusplus
}
#endif

#endif
