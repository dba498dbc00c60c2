#ifndef PG4_PG_LINALG_HPP
#define PG4_PG_LINALG_HPP

#include <array>
#include <cmath>

#include "pg4/errors.hpp"

namespace pg4 {

// Isotropy tolerance on |first component| used for branch selection in the
// scalar and cross products. Curves produce first components that are
// exactly 1 or exactly 0 by construction, so this only absorbs float noise.
inline constexpr double kIsoTol = 1e-12;

// 4-vector in the affine chart of pseudo-Galilean 4-space. The first
// component plays a distinguished role: the scalar product degenerates to
// u.x*v.x as soon as either argument has nonzero first component.
struct PGVec4 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    PGVec4() = default;
    PGVec4(double x_, double y_, double z_, double w_) : x(x_), y(y_), z(z_), w(w_) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !std::isfinite(w))
            throw InputError("PGVec4: non-finite component");
    }

    PGVec4 operator+(const PGVec4& o) const { return {x + o.x, y + o.y, z + o.z, w + o.w}; }
    PGVec4 operator-(const PGVec4& o) const { return {x - o.x, y - o.y, z - o.z, w - o.w}; }
    PGVec4 operator*(double c) const { return {c * x, c * y, c * z, c * w}; }
    PGVec4 operator/(double c) const { return {x / c, y / c, z / c, w / c}; }
    PGVec4 operator-() const { return {-x, -y, -z, -w}; }

    double operator[](int i) const {
        switch (i) {
            case 0: return x;
            case 1: return y;
            case 2: return z;
            default: return w;
        }
    }
};

inline PGVec4 operator*(double c, const PGVec4& v) { return v * c; }

enum class CausalCharacter {
    NonIsotropic,       // x != 0
    SpacelikeIsotropic, // x == 0, -y^2+z^2+w^2 > 0
    TimelikeIsotropic,  // x == 0, -y^2+z^2+w^2 < 0
    Lightlike           // x == 0, -y^2+z^2+w^2 == 0
};

// Signature (-,+,+) product on the last three components. This is the
// isotropic-branch scalar product; exposed because frame algebra uses it
// on vectors whose first component is exactly zero.
inline double iso_quad(const PGVec4& u, const PGVec4& v) {
    return -u.y * v.y + u.z * v.z + u.w * v.w;
}

// Pseudo-Galilean scalar product: u.x*v.x when either first component is
// nonzero (within tol), else the (-,+,+) product of the remaining parts.
inline double pg_dot(const PGVec4& u, const PGVec4& v, double tol = kIsoTol) {
    const bool u_iso = std::fabs(u.x) <= tol;
    const bool v_iso = std::fabs(v.x) <= tol;
    if (!u_iso || !v_iso) return u.x * v.x;
    return iso_quad(u, v);
}

inline double pg_norm(const PGVec4& u, double tol = kIsoTol) {
    return std::sqrt(std::fabs(pg_dot(u, u, tol)));
}

CausalCharacter classify(const PGVec4& u, double tol = kIsoTol);

// Triple cross product. Evaluated by explicit cofactor expansion of the
// formal determinant whose first row is (0,-e2,e3,e4) when any argument is
// non-isotropic and (-e1,e2,e3,e4) when all three are isotropic.
PGVec4 pg_cross(const PGVec4& u, const PGVec4& v, const PGVec4& w, double tol = kIsoTol);

// Distance between points: |dx| when the first coordinates differ,
// otherwise the (-,+,+) length of the remaining displacement.
double pg_distance(const PGVec4& p1, const PGVec4& p2);

const char* to_string(CausalCharacter c);

} // namespace pg4

#endif
