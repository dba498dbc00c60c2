#include "pg4/pg_linalg.hpp"

namespace pg4 {

CausalCharacter classify(const PGVec4& u, double tol) {
    if (tol < 0.0) throw InputError("classify: tol must be >= 0");
    if (std::fabs(u.x) > tol) return CausalCharacter::NonIsotropic;
    const double q = -u.y * u.y + u.z * u.z + u.w * u.w;
    if (std::fabs(q) <= tol) return CausalCharacter::Lightlike;
    return q > 0.0 ? CausalCharacter::SpacelikeIsotropic : CausalCharacter::TimelikeIsotropic;
}

namespace {

inline double det3(double a, double b, double c,
                   double d, double e, double f,
                   double g, double h, double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

} // namespace

PGVec4 pg_cross(const PGVec4& u, const PGVec4& v, const PGVec4& w, double tol) {
    // 3x3 minors of the bottom block (u;v;w), M1j = minor deleting column j.
    const double m11 = det3(u.y, u.z, u.w, v.y, v.z, v.w, w.y, w.z, w.w);
    const double m12 = det3(u.x, u.z, u.w, v.x, v.z, v.w, w.x, w.z, w.w);
    const double m13 = det3(u.x, u.y, u.w, v.x, v.y, v.w, w.x, w.y, w.w);
    const double m14 = det3(u.x, u.y, u.z, v.x, v.y, v.z, w.x, w.y, w.z);

    const bool all_iso = std::fabs(u.x) <= tol && std::fabs(v.x) <= tol && std::fabs(w.x) <= tol;
    if (!all_iso) {
        // first row (0, -e2, e3, e4): e2*M12 + e3*M13 - e4*M14
        return {0.0, m12, m13, -m14};
    }
    // first row (-e1, e2, e3, e4): -e1*M11 - e2*M12 + e3*M13 - e4*M14
    return {-m11, -m12, m13, -m14};
}

double pg_distance(const PGVec4& p1, const PGVec4& p2) {
    const double dx = p2.x - p1.x;
    if (dx != 0.0) return std::fabs(dx);
    const double dy = p2.y - p1.y;
    const double dz = p2.z - p1.z;
    const double dw = p2.w - p1.w;
    return std::sqrt(std::fabs(-dy * dy + dz * dz + dw * dw));
}

const char* to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::NonIsotropic: return "non-isotropic";
        case CausalCharacter::SpacelikeIsotropic: return "spacelike-isotropic";
        case CausalCharacter::TimelikeIsotropic: return "timelike-isotropic";
        default: return "lightlike";
    }
}

} // namespace pg4
