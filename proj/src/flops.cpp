#include "sw/flops.hpp"

#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sw {

namespace {

// Exact integer product with 128-bit accumulation; throws instead of wrapping.
uint64_t checked_product(std::initializer_list<int64_t> factors) {
  unsigned __int128 acc = 1;
  for (int64_t f : factors) {
    if (f <= 0) throw std::invalid_argument("flops factors must be positive");
    acc *= static_cast<unsigned __int128>(f);
    if (acc > std::numeric_limits<uint64_t>::max())
      throw std::overflow_error("flops count exceeds 64-bit range");
  }
  return static_cast<uint64_t>(acc);
}

}  // namespace

void ShapeSpec::validate() const {
  if (b <= 0 || f <= 0 || h <= 0 || w <= 0 || d <= 0)
    throw std::invalid_argument("shape extents must be positive");
}

uint64_t flops_full_head(int64_t tokens, int64_t dim) {
  if (tokens <= 0 || dim <= 0) throw std::invalid_argument("flops_full_head: L and d must be positive");
  return checked_product({4, tokens, tokens, dim});
}

FlopsReport flops_decomposed(const ShapeSpec& s, int64_t d_c) {
  s.validate();
  if (d_c < 0) throw std::invalid_argument("d_c must be nonnegative");
  FlopsReport r;
  r.shape = s;
  r.analytic_full4d = checked_product({16, s.b, s.f, s.f, s.h, s.h, s.w, s.w, s.d});
  r.analytic_3d = checked_product({8, s.b, s.f, s.f, s.h, s.h, s.w, s.w, s.d});
  r.analytic_row = checked_product({4, s.b, s.f, s.h, s.w, s.w, s.d});
  r.analytic_stereo_total = r.analytic_3d + r.analytic_row;
  r.ratio = static_cast<double>(r.analytic_full4d) / static_cast<double>(r.analytic_stereo_total);
  if (d_c > 0) {
    // Score product runs over d+d_c while the value product stays at d, so
    // the adjusted full-head cost is 4L^2*d + 2L^2*d_c per group.
    const uint64_t l4 = checked_product({2, s.f, s.h, s.w});
    const uint64_t extra4 = checked_product({2, static_cast<int64_t>(l4), static_cast<int64_t>(l4), d_c});
    r.adjusted_full4d = r.analytic_full4d + s.b * extra4;
    const uint64_t l3 = checked_product({s.f, s.h, s.w});
    const uint64_t extra3 = checked_product({2, 2, static_cast<int64_t>(l3), static_cast<int64_t>(l3), d_c});
    const uint64_t lr = checked_product({2, s.w});
    const uint64_t extrar =
        checked_product({2, s.f, s.h, static_cast<int64_t>(lr), static_cast<int64_t>(lr), d_c});
    r.adjusted_stereo_total = r.analytic_stereo_total + s.b * (extra3 + extrar);
    r.has_dc_adjusted = true;
  }
  return r;
}

std::string flops_report_json(const FlopsReport& r) {
  nlohmann::ordered_json j;
  j["b"] = r.shape.b;
  j["f"] = r.shape.f;
  j["h"] = r.shape.h;
  j["w"] = r.shape.w;
  j["d"] = r.shape.d;
  j["full4d"] = r.analytic_full4d;
  j["attn3d"] = r.analytic_3d;
  j["row"] = r.analytic_row;
  j["stereo_total"] = r.analytic_stereo_total;
  j["ratio"] = r.ratio;
  if (r.has_empirical) {
    j["empirical"] = {{"full4d", r.empirical_full4d},
                      {"attn3d", r.empirical_3d},
                      {"row", r.empirical_row},
                      {"stereo_total", r.empirical_stereo_total}};
  }
  if (r.has_dc_adjusted) {
    j["dc_adjusted"] = {{"full4d", r.adjusted_full4d}, {"stereo_total", r.adjusted_stereo_total}};
  }
  return j.dump(2);
}

std::string flops_report_csv_header(const FlopsReport& r) {
  std::string header = "b,f,h,w,d,full4d,attn3d,row,stereo_total,ratio";
  if (r.has_empirical) header += ",emp_full4d,emp_attn3d,emp_row,emp_stereo_total";
  if (r.has_dc_adjusted) header += ",adj_full4d,adj_stereo_total";
  return header;
}

std::string flops_report_csv_row(const FlopsReport& r) {
  char ratio_buf[32];
  std::snprintf(ratio_buf, sizeof(ratio_buf), "%.17g", r.ratio);
  std::ostringstream os;
  os << r.shape.b << ',' << r.shape.f << ',' << r.shape.h << ',' << r.shape.w << ',' << r.shape.d
     << ',' << r.analytic_full4d << ',' << r.analytic_3d << ',' << r.analytic_row << ','
     << r.analytic_stereo_total << ',' << ratio_buf;
  if (r.has_empirical)
    os << ',' << r.empirical_full4d << ',' << r.empirical_3d << ',' << r.empirical_row << ','
       << r.empirical_stereo_total;
  if (r.has_dc_adjusted) os << ',' << r.adjusted_full4d << ',' << r.adjusted_stereo_total;
  return os.str();
}

}  // namespace sw
