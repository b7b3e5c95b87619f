#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace sw {

/// Per-invocation multiply-add accumulator. Attention kernels report the
/// score (QK^T) and value (AV) products here when a counter is supplied;
/// projection matmuls never do. Counts use the 2*m*n*k convention (one
/// multiply plus one add per MAC).
class FlopsCounter {
 public:
  void add(uint64_t multiply_adds) { total_.fetch_add(multiply_adds, std::memory_order_relaxed); }
  uint64_t total() const { return total_.load(std::memory_order_relaxed); }
  void reset() { total_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<uint64_t> total_{0};
};

struct ShapeSpec {
  int64_t b = 1;  // batch
  int64_t f = 1;  // latent frames
  int64_t h = 1;  // latent grid height
  int64_t w = 1;  // latent grid width
  int64_t d = 1;  // head dimension

  void validate() const;
};

/// Analytic and (optionally) empirically counted multiply-add totals for the
/// attention variants at one shape. Analytic values follow the closed-form
/// cost model; empirical values come from FlopsCounter instrumentation.
struct FlopsReport {
  ShapeSpec shape;
  uint64_t analytic_full4d = 0;
  uint64_t analytic_3d = 0;
  uint64_t analytic_row = 0;
  uint64_t analytic_stereo_total = 0;
  double ratio = 0.0;  // analytic_full4d / analytic_stereo_total

  bool has_empirical = false;
  uint64_t empirical_full4d = 0;
  uint64_t empirical_3d = 0;
  uint64_t empirical_row = 0;
  uint64_t empirical_stereo_total = 0;

  // Totals with the camera expansion d -> d+d_c folded into the score
  // product. Reported separately; the base columns ignore d_c.
  bool has_dc_adjusted = false;
  uint64_t adjusted_full4d = 0;
  uint64_t adjusted_stereo_total = 0;
};

/// Cost of one vanilla full attention head over L tokens: 4*L^2*d.
uint64_t flops_full_head(int64_t tokens, int64_t dim);

/// Analytic decomposition report for a stereo grid shape.
///   full4d = 16*b*f^2*h^2*w^2*d   (joint attention over 2*f*h*w tokens)
///   3d     = 8*b*f^2*h^2*w^2*d    (two per-view heads of f*h*w tokens)
///   row    = 4*b*f*h*w^2*d        (per-row cross-view term, 2w group folded)
FlopsReport flops_decomposed(const ShapeSpec& shape, int64_t d_c = 0);

std::string flops_report_json(const FlopsReport& report);
std::string flops_report_csv_header(const FlopsReport& report);
std::string flops_report_csv_row(const FlopsReport& report);

}  // namespace sw
