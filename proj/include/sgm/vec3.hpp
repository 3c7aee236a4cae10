#pragma once

#include <array>
#include <cmath>

#include "sgm/error.hpp"

namespace sgm {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double norm_inf(const Vec3& v) {
  return std::max(std::abs(v.x), std::max(std::abs(v.y), std::abs(v.z)));
}

/// Column-major-thinking free: row-major 3x3 matrix, m[r][c].
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Mat3 identity() { return {}; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
};

/// Hat map: so(3) matrix with hat(u) * w == cross(u, w).
inline Mat3 hat(const Vec3& u) {
  Mat3 r;
  r.m = {{{0, -u.z, u.y}, {u.z, 0, -u.x}, {-u.y, u.x, 0}}};
  return r;
}

inline Vec3 vee(const Mat3& A) { return {A.m[2][1], A.m[0][2], A.m[1][0]}; }

/// Rodrigues formula, exact for any axis-angle vector.
inline Mat3 so3_exp(const Vec3& w) {
  double th = norm(w);
  Mat3 K = hat(w);
  Mat3 K2 = K * K;
  double a, b;
  if (th < 1e-8) {
    a = 1.0 - th * th / 6.0;
    b = 0.5 - th * th / 24.0;
  } else {
    a = std::sin(th) / th;
    b = (1.0 - std::cos(th)) / (th * th);
  }
  Mat3 r = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] += a * K.m[i][j] + b * K2.m[i][j];
  return r;
}

/// Inverse of so3_exp for rotations with angle < pi.
inline Vec3 so3_log(const Mat3& R) {
  double tr = R.m[0][0] + R.m[1][1] + R.m[2][2];
  double c = std::clamp((tr - 1.0) * 0.5, -1.0, 1.0);
  double th = std::acos(c);
  Vec3 w = {R.m[2][1] - R.m[1][2], R.m[0][2] - R.m[2][0], R.m[1][0] - R.m[0][1]};
  if (th < 1e-8) return w * 0.5;
  if (th > M_PI - 1e-6)
    throw Error(ErrorCode::invalid_argument, "so3_log near angle pi is not supported");
  return w * (th / (2.0 * std::sin(th)));
}

inline Mat3 rotation_z(double angle) {
  return so3_exp({0, 0, angle});
}

inline bool is_special_orthogonal(const Mat3& R, double tol = 1e-12) {
  Mat3 RtR = R.transpose() * R;
  double err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(RtR.m[i][j] - (i == j ? 1.0 : 0.0)));
  return err <= tol && std::abs(R.det() - 1.0) <= tol;
}

}  // namespace sgm
