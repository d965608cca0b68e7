#ifndef PSE_C_API_H_
#define PSE_C_API_H_

/* Flat C interface over contiguous row-major double buffers, for foreign
 * callers (host generation pipelines). Buffers are never modified. Every
 * function returns 0 on success; on failure it returns nonzero and, when
 * `err` is non-null, writes a NUL-terminated message (truncated to
 * `err_len`). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  PSE_OK = 0,
  PSE_ERR_INPUT = 1,
  PSE_ERR_INTERNAL = 2
};

enum { PSE_DEPTH = 0, PSE_DISPARITY = 1 };
enum { PSE_COMBINE_MEAN = 0, PSE_COMBINE_MIN = 1 };

typedef struct pse_score_result {
  double pse;
  double pos_forward;
  double pos_backward;
  int present_a;
  int present_b;
  /* -1 when not computed (depth relations or missing objects). */
  int center_verdict;
} pse_score_result;

/* Scores `relation` ("right", "above_left", "in_front", ...) between two
 * masks of height x width. `depth` may be NULL for planar relations. */
int pse_score_buffers(const double* mask_a, const double* mask_b, int64_t height,
                      int64_t width, const char* relation, const double* depth,
                      int depth_convention, int combine, int depth_bins,
                      pse_score_result* out, char* err, size_t err_len);

/* -PoS^2 loss and raw-weight gradients for two attention maps along the
 * relation's axes (composites sum their components). grad_a and grad_b must
 * hold height*width doubles. */
int pse_loss_grad_buffers(const double* attn_a, const double* attn_b, int64_t height,
                          int64_t width, const char* relation, double* loss,
                          double* grad_a, double* grad_b, char* err, size_t err_len);

int pse_ucb_value(int64_t pull_count, double score_sum, int64_t t, double alpha,
                  double* out, char* err, size_t err_len);

/* Next arm for the given per-arm statistics (unpulled arms first). */
int pse_select_arm(const int64_t* pull_counts, const double* score_sums, size_t arm_count,
                   double alpha, size_t* out, char* err, size_t err_len);

#ifdef __cplusplus
}
#endif

#endif /* PSE_C_API_H_ */
