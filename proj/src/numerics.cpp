#include "pg4/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pg4 {

namespace {

double factorial(int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return f;
}

// Solve the q x q moment system for stencil weights with partial pivoting.
// Accumulation in long double keeps the wider one-sided systems clean.
std::vector<double> solve_moment_system(const std::vector<int>& offsets, int m) {
    const int q = static_cast<int>(offsets.size());
    std::vector<std::vector<long double>> a(q, std::vector<long double>(q + 1, 0.0L));
    for (int p = 0; p < q; ++p) {
        for (int i = 0; i < q; ++i) {
            long double pw = 1.0L;
            for (int e = 0; e < p; ++e) pw *= offsets[i];
            a[p][i] = pw;
        }
        a[p][q] = (p == m) ? static_cast<long double>(factorial(m)) : 0.0L;
    }
    for (int col = 0; col < q; ++col) {
        int piv = col;
        for (int r = col + 1; r < q; ++r)
            if (std::fabs(static_cast<double>(a[r][col])) > std::fabs(static_cast<double>(a[piv][col]))) piv = r;
        std::swap(a[col], a[piv]);
        if (a[col][col] == 0.0L) throw Error("stencil: singular moment system");
        for (int r = 0; r < q; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            for (int c = col; c <= q; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> w(q);
    for (int i = 0; i < q; ++i) w[i] = static_cast<double>(a[i][q] / a[i][i]);
    return w;
}

} // namespace

Stencil::Stencil(int m, int acc, std::vector<int> offs)
    : derivative_order(m), accuracy(acc), offsets(std::move(offs)) {
    if (m < 0 || accuracy < 1 || offsets.empty())
        throw InputError("Stencil: bad parameters");
    weights = solve_moment_system(offsets, m);

    // Moment conditions up to m + accuracy - 1 must hold exactly (within
    // roundoff of the weighted power sums). Symmetric windows satisfy one
    // moment beyond the solved system, which is what the even-derivative
    // central stencils rely on for their accuracy order.
    const int q = static_cast<int>(offsets.size());
    bool symmetric = true;
    for (int i = 0; i < q; ++i)
        if (offsets[i] != -offsets[q - 1 - i]) symmetric = false;
    const int p_max = std::min(m + accuracy - 1, q - 1 + (symmetric ? 1 : 0));
    for (int p = 0; p <= p_max; ++p) {
        long double s = 0.0L, mag = 0.0L;
        for (int i = 0; i < q; ++i) {
            long double pw = 1.0L;
            for (int e = 0; e < p; ++e) pw *= offsets[i];
            s += weights[i] * pw;
            mag += std::fabs(static_cast<double>(weights[i] * pw));
        }
        const double want = (p == m) ? factorial(m) : 0.0;
        const double tol = 1e-9 * std::max(1.0, static_cast<double>(mag));
        if (std::fabs(static_cast<double>(s) - want) > tol)
            throw Error("Stencil: moment condition failed at p=" + std::to_string(p));
    }
}

double Stencil::apply(std::span<const double> samples, long center) const {
    double s = 0.0;
    for (size_t i = 0; i < offsets.size(); ++i)
        s += weights[i] * samples[static_cast<size_t>(center + offsets[i])];
    return s;
}

Stencil central_stencil(int m, int acc) {
    // Symmetric window; odd moments beyond the solved system vanish by
    // symmetry, which is what makes the 5-point second-derivative stencil
    // 4th order.
    const int r = 2 * ((m + 1) / 2) - 1 + acc; // width - 1
    const int half = r / 2;
    std::vector<int> offs;
    for (int i = -half; i <= half; ++i) offs.push_back(i);
    return Stencil(m, acc, std::move(offs));
}

Stencil shifted_stencil(int m, int acc, int first_offset, int width) {
    std::vector<int> offs;
    for (int i = 0; i < width; ++i) offs.push_back(first_offset + i);
    return Stencil(m, acc, std::move(offs));
}

std::vector<double> diff(std::span<const double> samples, double h,
                         int m, int acc, int boundary_acc) {
    if (h <= 0.0) throw InputError("diff: h must be positive");
    if (m < 1 || m > 4) throw InputError("diff: derivative_order must be 1..4");
    if (boundary_acc < 0) boundary_acc = acc;

    const long n = static_cast<long>(samples.size());
    const Stencil cen = central_stencil(m, acc);
    const int half = static_cast<int>(cen.offsets.size()) / 2;
    const int bw = m + boundary_acc; // shifted window width
    if (n < std::max<long>(cen.offsets.size(), bw))
        throw GridTooSmall("diff: " + std::to_string(n) + " samples, need " +
                           std::to_string(std::max<long>(cen.offsets.size(), bw)));

    const double hm = std::pow(h, m);
    std::vector<double> out(n);
    for (long i = half; i < n - half; ++i) out[i] = cen.apply(samples, i) / hm;

    for (long i = 0; i < half; ++i) {
        Stencil st = shifted_stencil(m, boundary_acc, static_cast<int>(-i), bw);
        out[i] = st.apply(samples, i) / hm;
        Stencil st2 = shifted_stencil(m, boundary_acc, static_cast<int>(-(bw - 1) + i), bw);
        out[n - 1 - i] = st2.apply(samples, n - 1 - i) / hm;
    }
    return out;
}

double simpson(std::span<const double> samples, double h) {
    const long n = static_cast<long>(samples.size());
    if (n < 3) throw GridTooSmall("simpson: need at least 3 samples");
    if (h <= 0.0) throw InputError("simpson: h must be positive");

    const long intervals = n - 1;
    long simpson_end = intervals; // index up to which plain Simpson runs
    double total = 0.0;
    if (intervals % 2 != 0) {
        simpson_end = intervals - 3;
        // trailing 3/8 panel over the last three intervals
        total += 3.0 * h / 8.0 *
                 (samples[simpson_end] + 3.0 * samples[simpson_end + 1] +
                  3.0 * samples[simpson_end + 2] + samples[simpson_end + 3]);
    }
    if (simpson_end >= 2) {
        double s = samples[0] + samples[simpson_end];
        for (long i = 1; i < simpson_end; i += 2) s += 4.0 * samples[i];
        for (long i = 2; i < simpson_end; i += 2) s += 2.0 * samples[i];
        total += h / 3.0 * s;
    }
    return total;
}

std::vector<double> simpson_prefix(std::span<const double> samples, double h) {
    const long n = static_cast<long>(samples.size());
    if (n < 3) throw GridTooSmall("simpson_prefix: need at least 3 samples");
    std::vector<double> out(n, 0.0);
    // First interval from the parabola through samples 0..2.
    out[1] = h / 12.0 * (5.0 * samples[0] + 8.0 * samples[1] - samples[2]);
    for (long k = 2; k < n; ++k)
        out[k] = simpson(samples.subspan(0, static_cast<size_t>(k + 1)), h);
    return out;
}

double simpson_error_estimate(std::span<const double> samples, double h) {
    const long n = static_cast<long>(samples.size());
    if (n < 5) return 0.0;
    std::vector<double> coarse;
    for (long i = 0; i < n; i += 2) coarse.push_back(samples[i]);
    // Only compare over the common range when n is even.
    const long fine_end = 2 * (static_cast<long>(coarse.size()) - 1);
    const double fine = simpson(samples.subspan(0, static_cast<size_t>(fine_end + 1)), h);
    return std::fabs(fine - simpson(coarse, 2.0 * h)) / 15.0;
}

double det4(const PGVec4& r0, const PGVec4& r1, const PGVec4& r2, const PGVec4& r3) {
    const std::array<std::array<double, 4>, 4> m = {{{r0.x, r0.y, r0.z, r0.w},
                                                     {r1.x, r1.y, r1.z, r1.w},
                                                     {r2.x, r2.y, r2.z, r2.w},
                                                     {r3.x, r3.y, r3.z, r3.w}}};
    auto minor3 = [&](int skip_col) {
        int c[3], k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != skip_col) c[k++] = j;
        return m[1][c[0]] * (m[2][c[1]] * m[3][c[2]] - m[2][c[2]] * m[3][c[1]]) -
               m[1][c[1]] * (m[2][c[0]] * m[3][c[2]] - m[2][c[2]] * m[3][c[0]]) +
               m[1][c[2]] * (m[2][c[0]] * m[3][c[1]] - m[2][c[1]] * m[3][c[0]]);
    };
    double det = 0.0, sign = 1.0;
    for (int j = 0; j < 4; ++j, sign = -sign) det += sign * m[0][j] * minor3(j);
    return det;
}

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.a[i][i] = 1.0;
    return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const double v = a[i][k];
            if (v == 0.0) continue;
            for (int j = 0; j < 4; ++j) r.a[i][j] += v * o.a[k][j];
        }
    return r;
}

Mat4 Mat4::operator+(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.a[i][j] = a[i][j] + o.a[i][j];
    return r;
}

Mat4 Mat4::operator*(double c) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.a[i][j] = c * a[i][j];
    return r;
}

double Mat4::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += std::fabs(a[i][j]);
        best = std::max(best, row);
    }
    return best;
}

Mat4 Mat4::transpose() const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.a[i][j] = a[j][i];
    return r;
}

Mat4 expm4(const Mat4& m, double t) {
    Mat4 a = m * t;
    const double nrm = a.inf_norm();
    if (nrm > 10.0) throw NormTooLarge("expm4: ||M*t|| = " + std::to_string(nrm) + " > 10");

    int squarings = 0;
    double scaled = nrm;
    while (scaled > 0.5) {
        scaled *= 0.5;
        ++squarings;
    }
    a = a * std::pow(0.5, squarings);

    // Taylor to order 18; with ||A|| <= 1/2 the truncation is far below
    // the 1e-10 relative target.
    Mat4 result = Mat4::identity();
    Mat4 term = Mat4::identity();
    for (int k = 1; k <= 18; ++k) {
        term = term * a * (1.0 / k);
        result = result + term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

OrderFit observed_order(std::span<const std::pair<double, double>> h_err) {
    if (h_err.size() < 2) throw InputError("observed_order: need >= 2 levels");
    bool all_noise = true;
    for (const auto& [h, e] : h_err) {
        if (h <= 0.0) throw InputError("observed_order: h must be positive");
        if (e < 0.0) throw InputError("observed_order: errors must be non-negative");
        if (e >= 1e-14) all_noise = false;
    }
    if (all_noise) return {0.0, true};

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const auto& [h, e] : h_err) {
        const double lx = std::log(h);
        const double ly = std::log(std::max(e, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-300) throw InputError("observed_order: degenerate h values");
    return {(n * sxy - sx * sy) / denom, false};
}

} // namespace pg4
