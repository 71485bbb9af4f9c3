/* Copyright 2026 The PimGNN Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C boundary for scripting front ends (ctypes, cffi). Objects live behind
 * integer handles; a released or unknown handle yields PIMGNN_E_HANDLE.
 * Every call returns a status; pimgnn_last_error() holds the message of the
 * last failure on the calling thread. Calls on one session (and the graphs
 * loaded into it) are serialized internally. */

#ifndef PIMGNN_C_API_H_
#define PIMGNN_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef uint64_t pimgnn_handle;

typedef enum {
  PIMGNN_OK = 0,
  PIMGNN_E_INVALID = 1,    /* bad argument or configuration */
  PIMGNN_E_HANDLE = 2,     /* unknown, released or wrong-type handle */
  PIMGNN_E_DIMENSION = 3,
  PIMGNN_E_CAPACITY = 4,   /* bank or scratchpad overflow */
  PIMGNN_E_OVERFLOW = 5,
  PIMGNN_E_PARSE = 6,
  PIMGNN_E_INTERNAL = 7
} pimgnn_status;

/* Element types of dense buffers: int32_t, int16_t, int8_t, float. */
typedef enum {
  PIMGNN_INT32 = 0,
  PIMGNN_INT16 = 1,
  PIMGNN_INT8 = 2,
  PIMGNN_FP32 = 3
} pimgnn_kind;

/* Row-major buffer descriptor. */
typedef struct {
  void* data;
  size_t rows;
  size_t cols;
  int32_t kind; /* pimgnn_kind */
} pimgnn_tensor;

/* format: 0 csr, 1 coo. balances: 0 vertex, 1 edge. sync: 0 coarse lock, 1 lock free. */
typedef struct {
  uint32_t sp;
  uint32_t dp;
  uint32_t grp;
  uint32_t format;
  uint32_t cluster_balance;
  uint32_t core_balance;
  uint32_t sync;
} pimgnn_config;

const char* pimgnn_last_error(void);

/* Session over `num_devices` devices of the default core and thread counts.
 * Both counts must be at least 1 and groups_per_device must not exceed the
 * cores of a device. */
int pim_init_devices(uint32_t num_devices, uint32_t groups_per_device, pimgnn_handle* session);
int pimgnn_session_clusters(pimgnn_handle session, size_t* clusters);

/* Graphs. CSR input is copied; values are converted to `kind`. */
int pimgnn_graph_from_csr(size_t n, const uint64_t* rowptr, const uint32_t* colind,
                          const double* values, int32_t kind, pimgnn_handle* graph);
int pimgnn_graph_from_mtx(const char* path, int32_t kind, pimgnn_handle* graph);
int pimgnn_graph_shape(pimgnn_handle graph, size_t* n, uint64_t* nnz);

/* Searches configurations with the session's calibrated profile. format is
 * "csr" or "coo". */
int pim_tune(pimgnn_handle session, pimgnn_handle graph, size_t hidden, const char* format,
             pimgnn_config* config);

/* Plans `graph` for `hidden` feature columns and checks bank capacity. */
int pim_load_graph_pim(pimgnn_handle session, pimgnn_handle graph, const pimgnn_config* config,
                       size_t hidden, pimgnn_handle* graph_pim);

/* Column ranges of the dense tiles a loaded graph expects: begins[i] and
 * ends[i] for i < *count. Pass NULL arrays to query the count. */
int pim_col_split(pimgnn_handle graph_pim, size_t* begins, size_t* ends, size_t* count);

/* One tile per dense partition, in order, each n x (tile width). `out` is
 * n x hidden in the graph's kind. `seconds` (optional) receives the
 * simulated total time. */
int pim_run_aggr(pimgnn_handle graph_pim, const pimgnn_tensor* tiles, size_t n_tiles,
                 pimgnn_tensor* out, double* seconds);

/* Releases any handle. Releasing twice returns PIMGNN_E_HANDLE. */
int pimgnn_release(pimgnn_handle handle);

#ifdef __cplusplus
}
#endif

#endif  // PIMGNN_C_API_H_
