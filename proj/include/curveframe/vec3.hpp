#pragma once

#include <cmath>

namespace curveframe {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }
    constexpr Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double c) {
        x *= c;
        y *= c;
        z *= c;
        return *this;
    }

    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }

    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    constexpr double norm2() const { return x * x + y * y + z * z; }

    double norm() const { return std::sqrt(norm2()); }

    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double c, const Vec3& v) { return v * c; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace curveframe
