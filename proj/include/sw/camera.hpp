#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sw/rng.hpp"

namespace sw {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const;
};

/// 3x3 row-major matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity();
  static Mat3 rotation_y(double radians);
  double& at(int r, int c) { return m[r * 3 + c]; }
  double at(int r, int c) const { return m[r * 3 + c]; }
  Mat3 transposed() const;
  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  double det() const;
};

/// 4x4 row-major matrix.
struct Mat4 {
  std::array<double, 16> m{};

  static Mat4 identity();
  double& at(int r, int c) { return m[r * 4 + c]; }
  double at(int r, int c) const { return m[r * 4 + c]; }
  Mat4 transposed() const;
  Mat4 operator*(const Mat4& o) const;
  /// Gaussian elimination with partial pivoting; throws on singular input.
  Mat4 inverse() const;
  bool is_finite() const;
};

double max_abs_diff(const Mat4& a, const Mat4& b);

/// Rotation log/exp (axis-angle). Used for shortest-arc interpolation.
Vec3 rotation_log(const Mat3& r);
Mat3 rotation_exp(const Vec3& axis_angle);

struct Intrinsics {
  double fx = 0, fy = 0;  // focal lengths, pixels
  double cx = 0, cy = 0;  // principal point, pixels
  double width = 0, height = 0;

  void validate() const;
  Mat3 matrix() const;
};

/// World-to-camera pose: x_cam = R * x_world + t. Right-handed, camera
/// looks down +z.
struct Extrinsics {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  void validate() const;  // R orthonormal, det +1, to 1e-6
  Mat4 matrix() const;
  Vec3 center() const;  // camera center in world coordinates, -R^T t

  static Extrinsics from_center(const Mat3& rotation, const Vec3& center);
};

struct Camera {
  Intrinsics intrinsics;
  Extrinsics extrinsics;
};

/// Rectified pair: both views share rotation and intrinsics; the right
/// center sits exactly `baseline` along the camera x-axis from the left.
struct StereoRig {
  Camera left;
  Camera right;
  double baseline = 0;  // meters

  static StereoRig rectified(const Intrinsics& intrinsics, const Extrinsics& left_pose,
                             double baseline);
  void validate() const;
};

struct Trajectory {
  std::vector<Camera> frames;

  void validate() const;
};

/// Scaling applied to camera parameters before they enter attention logits.
/// `none` keeps raw pixels/meters; `normalized` maps focal lengths by image
/// size, principal point to [-0.5, 0.5], and divides translations by
/// scene_scale.
struct NormalizationPolicy {
  bool normalized = false;
  double scene_scale = 20.0;

  static NormalizationPolicy none() { return {false, 1.0}; }
  static NormalizationPolicy image(double scene_scale = 20.0) { return {true, scene_scale}; }
};

/// P = K_hat * T with the (optionally normalized) 3x3 K embedded in the
/// upper-left block and 1 at (3,3).
Mat4 projective_matrix(const Camera& camera, const NormalizationPolicy& policy);

enum class CameraVariant : uint8_t { kTranspose, kInverse };

/// P1 * P2^T (transpose variant) or P1 * P2^-1 (inverse variant).
Mat4 relative_transform(const Mat4& p1, const Mat4& p2, CameraVariant variant);

/// d = fx * baseline / Z, pixels. Z must be positive.
double disparity_from_depth(double depth_m, const StereoRig& rig);

struct TrajectoryConfig {
  Intrinsics intrinsics{100.0, 100.0, 32.0, 32.0, 64.0, 64.0};
  double z_min_m = 4.0, z_max_m = 20.0;          // endpoint |z| range
  double yaw_min_deg = 50.0, yaw_max_deg = 150.0;  // endpoint |yaw| range
};

/// Random camera path: frame 0 at identity, endpoint translated along z with
/// |z| uniform in [z_min, z_max] (sign random) and rotated about y with |yaw|
/// uniform in [yaw_min, yaw_max] degrees (sign random). Intermediate frames
/// interpolate linearly in the camera center and along the shortest rotation
/// arc. Deterministic given the generator state.
Trajectory sample_trajectory(Rng& rng, int n_frames, const TrajectoryConfig& config);

/// Sideways pan used by the synthetic-scene harness: centers move linearly
/// along x from 0 to a random endpoint with |x| in [x_min, x_max], no
/// rotation.
Trajectory sample_lateral_trajectory(Rng& rng, int n_frames, const Intrinsics& intrinsics,
                                     double x_min_m, double x_max_m);

/// JSON schema: {"baseline_m": float, "frames":[{"K":[9],"T":[16]}...]},
/// floats formatted with 17 significant digits.
std::string trajectory_to_json(const Trajectory& trajectory, double baseline_m);
struct TrajectoryFile {
  Trajectory trajectory;
  double baseline_m = 0;
};
TrajectoryFile trajectory_from_json(const std::string& json_text);

}  // namespace sw
