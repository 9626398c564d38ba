/*
 * Copyright 2026 The prid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the prid partial person re-identification toolkit.
 *
 * All functions return a prid_status; results come back through out
 * parameters. Objects returned through prid_*_t handles are owned by the
 * caller and must be released with the matching *_free function. On
 * failure, prid_last_error() returns a thread-local description of what
 * went wrong.
 */

#ifndef PRID_PRID_H_
#define PRID_PRID_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PRID_API __declspec(dllexport)
#else
#define PRID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prid_status {
  PRID_OK = 0,
  PRID_ERR_VALIDATION = 1, /* bad arguments, malformed inputs */
  PRID_ERR_IO = 2,         /* filesystem / codec failures */
  PRID_ERR_NUMERIC = 3,    /* divergence, non-finite values */
  PRID_ERR_PROTOCOL = 4,   /* evaluation protocol violations */
  PRID_ERR_INTERNAL = 5
} prid_status;

/* Thread-local message describing the last failing call. */
PRID_API const char* prid_last_error(void);

PRID_API const char* prid_version(void);

/* --------------------------------------------------------------------- */
/* Plain-value types. */

/* (x, y) -> (scale*x + tx, scale*y + ty) */
typedef struct prid_transform {
  double scale;
  double tx;
  double ty;
} prid_transform;

/* Normalized rectangle: x, y, w, h are fractions of the frame size. */
typedef struct prid_rect {
  double x;
  double y;
  double w;
  double h;
} prid_rect;

/* --------------------------------------------------------------------- */
/* Images and validity masks. */

typedef struct prid_image_t prid_image_t;
typedef struct prid_mask_t prid_mask_t;

/* Loads an 8-bit PNG or PPM/PGM file; intensities are scaled to [0,1]. */
PRID_API prid_status prid_image_load(const char* path, prid_image_t** out);
PRID_API prid_status prid_image_save(const prid_image_t* image,
                                     const char* path);
/* data: interleaved row-major, length width*height*channels, values in
 * [0,1]. channels must be 1 or 3. */
PRID_API prid_status prid_image_create(int32_t width, int32_t height,
                                       int32_t channels, const double* data,
                                       prid_image_t** out);
PRID_API void prid_image_free(prid_image_t* image);

PRID_API int32_t prid_image_width(const prid_image_t* image);
PRID_API int32_t prid_image_height(const prid_image_t* image);
PRID_API int32_t prid_image_channels(const prid_image_t* image);
/* Valid until the image is freed. */
PRID_API const double* prid_image_data(const prid_image_t* image);

PRID_API prid_status prid_image_resize(const prid_image_t* image,
                                       int32_t out_width, int32_t out_height,
                                       prid_image_t** out);
PRID_API prid_status prid_image_crop(const prid_image_t* image, prid_rect rect,
                                     prid_image_t** out);
/* Inverse-warps into an out_width x out_height frame; out_mask flags which
 * output pixels sampled inside the source (the rest are zero padded). */
PRID_API prid_status prid_image_warp(const prid_image_t* image,
                                     prid_transform transform,
                                     int32_t out_width, int32_t out_height,
                                     prid_image_t** out_image,
                                     prid_mask_t** out_mask);

PRID_API void prid_mask_free(prid_mask_t* mask);
PRID_API int32_t prid_mask_width(const prid_mask_t* mask);
PRID_API int32_t prid_mask_height(const prid_mask_t* mask);
/* 1 = observed pixel, 0 = padded. */
PRID_API int32_t prid_mask_at(const prid_mask_t* mask, int32_t x, int32_t y);

/* Deterministic filler for padded areas (mirror / row mean / global mean). */
PRID_API prid_status prid_baseline_fill(const prid_image_t* image,
                                        const prid_mask_t* mask,
                                        prid_image_t** out);

/* --------------------------------------------------------------------- */
/* Joints, reference frames, alignment. */

typedef struct prid_joints_t prid_joints_t;       /* joint records of a file */
typedef struct prid_reference_t prid_reference_t; /* reference frame */

#define PRID_JOINT_COUNT 14

/* Loads line-delimited JSON joint records ({"image", "joints": [...x14]}). */
PRID_API prid_status prid_joints_load(const char* path, prid_joints_t** out);
PRID_API void prid_joints_free(prid_joints_t* joints);
PRID_API size_t prid_joints_count(const prid_joints_t* joints);
/* Copies record `index` into xy (length 28, x0,y0,x1,y1,...) and m
 * (length 14). Either pointer may be NULL. */
PRID_API prid_status prid_joints_get(const prid_joints_t* joints, size_t index,
                                     double* xy, double* m);

/* Per-joint means and confidence statistics over all records. */
PRID_API prid_status prid_reference_compute(const prid_joints_t* joints,
                                            int32_t width, int32_t height,
                                            double n_sigma,
                                            prid_reference_t** out);
PRID_API void prid_reference_free(prid_reference_t* reference);
PRID_API prid_status prid_reference_mean_xy(const prid_reference_t* reference,
                                            double* xy /* length 28 */);

/* Closed-form least-squares similarity from src to dst point lists
 * (xy pairs, n_points >= 2). */
PRID_API prid_status prid_estimate_similarity(const double* src_xy,
                                              const double* dst_xy,
                                              size_t n_points,
                                              prid_transform* out);

/* Aligns one image into the reference frame using joint record `index`.
 * n_reliable and used_fallback may be NULL. */
PRID_API prid_status prid_align_image(const prid_image_t* image,
                                      const prid_joints_t* joints,
                                      size_t index,
                                      const prid_reference_t* reference,
                                      prid_image_t** out_image,
                                      prid_mask_t** out_mask,
                                      prid_transform* out_transform,
                                      int32_t* n_reliable,
                                      int32_t* used_fallback);

/* --------------------------------------------------------------------- */
/* Crop sampling. */

/* area(a n b) / area(a) for equal-area rects. */
PRID_API prid_status prid_crop_overlap(prid_rect a, prid_rect b, double* out);

/* Pair of side-sqrt(s) crops with overlap >= o_min, drawn from the
 * substream keyed by (seed, record_index). */
PRID_API prid_status prid_sample_crop_pair(double s, double o_min,
                                           uint64_t seed,
                                           uint64_t record_index,
                                           prid_rect* out_a, prid_rect* out_b);

/* --------------------------------------------------------------------- */
/* Pipeline commands. */

/* Runs one pipeline command ("gen-crops", "align", "hallucinate", "embed",
 * "eval", "make-toy", "demo") with a JSON config, returning a JSON report.
 * The report string must be released with prid_string_free. */
PRID_API prid_status prid_run(const char* command, const char* config_json,
                              char** report_json);
PRID_API void prid_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PRID_PRID_H_ */
