#include "sw/camera.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sw {

namespace {
constexpr double kOrthoTol = 1e-6;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Mat3 Mat3::identity() {
  Mat3 r;
  r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  return r;
}

Mat3 Mat3::rotation_y(double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  Mat3 r;
  r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat4 Mat4::identity() {
  Mat4 r;
  r.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  return r;
}

Mat4 Mat4::transposed() const {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(i, j) = at(j, i);
  return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k) s += at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Mat4 Mat4::inverse() const {
  std::array<double, 32> a{};  // [A | I]
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i * 8 + j] = at(i, j);
    a[i * 8 + 4 + i] = 1.0;
  }
  double scale = 0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0) throw std::invalid_argument("singular matrix (zero)");
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r * 8 + col]) > std::abs(a[pivot * 8 + col])) pivot = r;
    if (std::abs(a[pivot * 8 + col]) < 1e-12 * scale)
      throw std::invalid_argument("singular matrix in inverse()");
    if (pivot != col)
      for (int j = 0; j < 8; ++j) std::swap(a[col * 8 + j], a[pivot * 8 + j]);
    const double inv_p = 1.0 / a[col * 8 + col];
    for (int j = 0; j < 8; ++j) a[col * 8 + j] *= inv_p;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r * 8 + col];
      if (f == 0) continue;
      for (int j = 0; j < 8; ++j) a[r * 8 + j] -= f * a[col * 8 + j];
    }
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.at(i, j) = a[i * 8 + 4 + j];
  return out;
}

bool Mat4::is_finite() const {
  return std::all_of(m.begin(), m.end(), [](double v) { return std::isfinite(v); });
}

double max_abs_diff(const Mat4& a, const Mat4& b) {
  double d = 0;
  for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

Vec3 rotation_log(const Mat3& r) {
  const double trace = r.at(0, 0) + r.at(1, 1) + r.at(2, 2);
  const double cos_a = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_a);
  if (angle < 1e-12) return {0, 0, 0};
  if (angle > std::numbers::pi - 1e-6)
    throw std::invalid_argument("rotation_log: angle too close to pi for a stable axis");
  const double s = 2.0 * std::sin(angle);
  return Vec3{(r.at(2, 1) - r.at(1, 2)) / s, (r.at(0, 2) - r.at(2, 0)) / s,
              (r.at(1, 0) - r.at(0, 1)) / s} *
         angle;
}

Mat3 rotation_exp(const Vec3& aa) {
  const double angle = aa.norm();
  if (angle < 1e-12) return Mat3::identity();
  const Vec3 axis = aa * (1.0 / angle);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r;
  r.m = {t * axis.x * axis.x + c,          t * axis.x * axis.y - s * axis.z,
         t * axis.x * axis.z + s * axis.y, t * axis.x * axis.y + s * axis.z,
         t * axis.y * axis.y + c,          t * axis.y * axis.z - s * axis.x,
         t * axis.x * axis.z - s * axis.y, t * axis.y * axis.z + s * axis.x,
         t * axis.z * axis.z + c};
  return r;
}

void Intrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0)) throw std::invalid_argument("focal lengths must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    throw std::invalid_argument("principal point must lie inside the image");
}

Mat3 Intrinsics::matrix() const {
  Mat3 k;
  k.m = {fx, 0, cx, 0, fy, cy, 0, 0, 1};
  return k;
}

void Extrinsics::validate() const {
  const Mat3 rtr = rotation.transposed() * rotation;
  const Mat3 eye = Mat3::identity();
  for (int i = 0; i < 9; ++i)
    if (std::abs(rtr.m[i] - eye.m[i]) > kOrthoTol)
      throw std::invalid_argument("extrinsic rotation is not orthonormal");
  if (std::abs(rotation.det() - 1.0) > kOrthoTol)
    throw std::invalid_argument("extrinsic rotation must have determinant +1");
}

Mat4 Extrinsics::matrix() const {
  Mat4 t = Mat4::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.at(i, j) = rotation.at(i, j);
  t.at(0, 3) = translation.x;
  t.at(1, 3) = translation.y;
  t.at(2, 3) = translation.z;
  return t;
}

Vec3 Extrinsics::center() const { return rotation.transposed() * (translation * -1.0); }

Extrinsics Extrinsics::from_center(const Mat3& rotation, const Vec3& center) {
  Extrinsics e;
  e.rotation = rotation;
  e.translation = (rotation * center) * -1.0;
  return e;
}

StereoRig StereoRig::rectified(const Intrinsics& intrinsics, const Extrinsics& left_pose,
                               double baseline) {
  if (!(baseline > 0)) throw std::invalid_argument("baseline must be positive");
  intrinsics.validate();
  left_pose.validate();
  StereoRig rig;
  rig.left = {intrinsics, left_pose};
  // Right center displaced by the baseline along the camera x-axis, which in
  // world-to-camera form is t_right = t_left - (b, 0, 0).
  Extrinsics right = left_pose;
  right.translation.x -= baseline;
  rig.right = {intrinsics, right};
  rig.baseline = baseline;
  return rig;
}

void StereoRig::validate() const {
  if (!(baseline > 0)) throw std::invalid_argument("baseline must be positive");
  left.intrinsics.validate();
  left.extrinsics.validate();
  right.intrinsics.validate();
  right.extrinsics.validate();
  const auto& li = left.intrinsics;
  const auto& ri = right.intrinsics;
  if (li.fx != ri.fx || li.fy != ri.fy || li.cx != ri.cx || li.cy != ri.cy)
    throw std::invalid_argument("rectified rig requires shared intrinsics");
  for (int i = 0; i < 9; ++i)
    if (std::abs(left.extrinsics.rotation.m[i] - right.extrinsics.rotation.m[i]) > kOrthoTol)
      throw std::invalid_argument("rectified rig requires a shared rotation");
  const Vec3 dt = left.extrinsics.translation - right.extrinsics.translation;
  if (std::abs(dt.x - baseline) > 1e-9 || std::abs(dt.y) > 1e-9 || std::abs(dt.z) > 1e-9)
    throw std::invalid_argument("right camera must sit exactly one baseline along camera x");
}

void Trajectory::validate() const {
  if (frames.empty()) throw std::invalid_argument("trajectory needs at least one frame");
  for (const auto& f : frames) {
    f.intrinsics.validate();
    f.extrinsics.validate();
  }
}

Mat4 projective_matrix(const Camera& camera, const NormalizationPolicy& policy) {
  camera.intrinsics.validate();
  camera.extrinsics.validate();
  Intrinsics k = camera.intrinsics;
  Extrinsics pose = camera.extrinsics;
  if (policy.normalized) {
    k.fx /= k.width;
    k.fy /= k.height;
    k.cx = k.cx / k.width - 0.5;
    k.cy = k.cy / k.height - 0.5;
    if (!(policy.scene_scale > 0)) throw std::invalid_argument("scene_scale must be positive");
    pose.translation = pose.translation * (1.0 / policy.scene_scale);
  }
  if (k.fx == 0 || k.fy == 0) throw std::invalid_argument("singular intrinsics");
  Mat4 k_hat = Mat4::identity();
  k_hat.at(0, 0) = k.fx;
  k_hat.at(0, 2) = policy.normalized ? k.cx : camera.intrinsics.cx;
  k_hat.at(1, 1) = k.fy;
  k_hat.at(1, 2) = policy.normalized ? k.cy : camera.intrinsics.cy;
  return k_hat * pose.matrix();
}

Mat4 relative_transform(const Mat4& p1, const Mat4& p2, CameraVariant variant) {
  if (variant == CameraVariant::kTranspose) return p1 * p2.transposed();
  return p1 * p2.inverse();
}

double disparity_from_depth(double depth_m, const StereoRig& rig) {
  if (!(depth_m > 0)) throw std::invalid_argument("depth must be positive");
  return rig.left.intrinsics.fx * rig.baseline / depth_m;
}

Trajectory sample_trajectory(Rng& rng, int n_frames, const TrajectoryConfig& config) {
  if (n_frames < 2) throw std::invalid_argument("trajectory needs at least 2 frames");
  config.intrinsics.validate();
  const double z_end = rng.uniform(config.z_min_m, config.z_max_m) * rng.sign();
  const double yaw_end =
      rng.uniform(config.yaw_min_deg, config.yaw_max_deg) * (std::numbers::pi / 180.0) * rng.sign();

  Trajectory traj;
  traj.frames.reserve(static_cast<size_t>(n_frames));
  for (int i = 0; i < n_frames; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(n_frames - 1);
    const Vec3 center{0, 0, a * z_end};
    const Mat3 rot = Mat3::rotation_y(a * yaw_end);  // shortest arc about a fixed axis
    traj.frames.push_back({config.intrinsics, Extrinsics::from_center(rot, center)});
  }
  return traj;
}

Trajectory sample_lateral_trajectory(Rng& rng, int n_frames, const Intrinsics& intrinsics,
                                     double x_min_m, double x_max_m) {
  if (n_frames < 2) throw std::invalid_argument("trajectory needs at least 2 frames");
  intrinsics.validate();
  const double x_end = rng.uniform(x_min_m, x_max_m) * rng.sign();
  Trajectory traj;
  traj.frames.reserve(static_cast<size_t>(n_frames));
  for (int i = 0; i < n_frames; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(n_frames - 1);
    traj.frames.push_back(
        {intrinsics, Extrinsics::from_center(Mat3::identity(), Vec3{a * x_end, 0, 0})});
  }
  return traj;
}

std::string trajectory_to_json(const Trajectory& trajectory, double baseline_m) {
  trajectory.validate();
  std::ostringstream os;
  os << "{\"baseline_m\": " << fmt17(baseline_m) << ", \"frames\": [";
  for (size_t i = 0; i < trajectory.frames.size(); ++i) {
    const auto& frame = trajectory.frames[i];
    const Mat3 k = frame.intrinsics.matrix();
    const Mat4 t = frame.extrinsics.matrix();
    os << (i ? ", " : "") << "{\"K\": [";
    for (int j = 0; j < 9; ++j) os << (j ? ", " : "") << fmt17(k.m[j]);
    os << "], \"T\": [";
    for (int j = 0; j < 16; ++j) os << (j ? ", " : "") << fmt17(t.m[j]);
    os << "]}";
  }
  os << "]}\n";
  return os.str();
}

TrajectoryFile trajectory_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  TrajectoryFile out;
  out.baseline_m = j.at("baseline_m").get<double>();
  for (const auto& jf : j.at("frames")) {
    const auto k = jf.at("K").get<std::vector<double>>();
    const auto t = jf.at("T").get<std::vector<double>>();
    if (k.size() != 9 || t.size() != 16)
      throw std::runtime_error("trajectory frame must carry 9 K and 16 T floats");
    Camera cam;
    cam.intrinsics.fx = k[0];
    cam.intrinsics.fy = k[4];
    cam.intrinsics.cx = k[2];
    cam.intrinsics.cy = k[5];
    // K alone does not carry the image size; assume a centered principal
    // point when reconstructing it.
    cam.intrinsics.width = k[2] > 0 ? 2.0 * k[2] : std::max(k[0], 1.0);
    cam.intrinsics.height = k[5] > 0 ? 2.0 * k[5] : std::max(k[4], 1.0);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cam.extrinsics.rotation.at(r, c) = t[r * 4 + c];
    cam.extrinsics.translation = {t[3], t[7], t[11]};
    cam.intrinsics.validate();
    cam.extrinsics.validate();
    out.trajectory.frames.push_back(cam);
  }
  out.trajectory.validate();
  return out;
}

}  // namespace sw
