#ifndef BITPATH_H
#define BITPATH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BitpathMethod {
  BITPATH_METHOD_BITPATH = 0,
  BITPATH_METHOD_DFS = 1,
  BITPATH_METHOD_FDFS = 2,
  BITPATH_METHOD_BBFS = 3,
} BitpathMethod;

typedef enum BitpathStatus {
  BITPATH_STATUS_OK = 0,
  BITPATH_STATUS_NULL_ARGUMENT = 1,
  BITPATH_STATUS_INVALID_UTF8 = 2,
  BITPATH_STATUS_IO = 3,
  BITPATH_STATUS_PARSE = 4,
  BITPATH_STATUS_CORRUPT_INDEX = 5,
  BITPATH_STATUS_UNKNOWN_NODE = 6,
  BITPATH_STATUS_TIMEOUT = 7,
  BITPATH_STATUS_INVALID_ARGUMENT = 8,
  BITPATH_STATUS_PANIC = 9,
} BitpathStatus;

/*
 Opaque index handle.
 */
typedef struct BitpathIndex BitpathIndex;

typedef struct BitpathQueryResult {
  /*
   1 for YES, 0 for NO.
   */
  uint8_t answer;
  uint64_t elapsed_ns;
  uint64_t dnc_calls;
  uint64_t intersections;
} BitpathQueryResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds an index from a tab-separated edge list file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BitpathStatus bitpath_index_build_from_tsv(const char *path, struct BitpathIndex **out);

/*
 Builds an index from edge-list text held in memory.

 # Safety
 `tsv` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BitpathStatus bitpath_index_build_from_tsv_text(const char *tsv, struct BitpathIndex **out);

/*
 Loads a serialized index file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BitpathStatus bitpath_index_load(const char *path, struct BitpathIndex **out);

/*
 Writes `idx` to `path`.

 # Safety
 `idx` must come from this library and `path` be a NUL-terminated string.
 */
enum BitpathStatus bitpath_index_save(const struct BitpathIndex *idx, const char *path);

/*
 Releases a handle. NULL is ignored.

 # Safety
 `idx` must come from this library and not be used afterwards.
 */
void bitpath_index_free(struct BitpathIndex *idx);

/*
 Nodes of the collapsed graph; 0 for NULL.

 # Safety
 `idx` must be NULL or come from this library.
 */
size_t bitpath_index_node_count(const struct BitpathIndex *idx);

/*
 Edges of the collapsed graph; 0 for NULL.

 # Safety
 `idx` must be NULL or come from this library.
 */
size_t bitpath_index_edge_count(const struct BitpathIndex *idx);

/*
 Distinct labels; 0 for NULL.

 # Safety
 `idx` must be NULL or come from this library.
 */
size_t bitpath_index_label_count(const struct BitpathIndex *idx);

/*
 Answers one query. `method` is a [`BitpathMethod`] value. `labels` may be
 NULL when `label_count` is 0. A `timeout_ms` of 0 means no deadline.

 # Safety
 `idx` must come from this library, the strings must be NUL-terminated,
 `labels` must point to `label_count` strings and `out` must be valid.
 */
enum BitpathStatus bitpath_query(const struct BitpathIndex *idx,
                                 const char *source,
                                 const char *destination,
                                 const char *const *labels,
                                 size_t label_count,
                                 uint32_t method,
                                 uint64_t timeout_ms,
                                 struct BitpathQueryResult *out);

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *bitpath_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *bitpath_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BITPATH_H */
