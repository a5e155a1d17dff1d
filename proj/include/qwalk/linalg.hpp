#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qwalk {

using cdouble = std::complex<double>;

// Thrown when a numerical invariant (trace, completeness, light cone) is
// violated at run time, as opposed to a bad argument.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 2x2 complex matrix, row-major. Small enough that everything is by value.
struct Mat2 {
    std::array<cdouble, 4> e{};

    constexpr cdouble& operator()(int r, int c) { return e[2 * r + c]; }
    constexpr const cdouble& operator()(int r, int c) const { return e[2 * r + c]; }

    static constexpr Mat2 zero() { return {}; }
    static constexpr Mat2 identity() { return {{cdouble{1.0}, {}, {}, cdouble{1.0}}}; }

    Mat2 adjoint() const {
        return {{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
    }

    cdouble trace() const { return e[0] + e[3]; }
    cdouble det() const { return e[0] * e[3] - e[1] * e[2]; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                 a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
    }
    friend Mat2 operator*(cdouble s, const Mat2& m) {
        return {{s * m.e[0], s * m.e[1], s * m.e[2], s * m.e[3]}};
    }
    friend Mat2 operator*(double s, const Mat2& m) { return cdouble{s} * m; }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {{a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]}};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {{a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]}};
    }

    bool operator==(const Mat2&) const = default;
};

constexpr Mat2 mat2(cdouble a, cdouble b, cdouble c, cdouble d) {
    return Mat2{{a, b, c, d}};
}

inline double max_abs(const Mat2& m) {
    double v = 0.0;
    for (const auto& x : m.e) v = std::max(v, std::abs(x));
    return v;
}

// max-entry norm of U†U - I
inline double unitarity_defect(const Mat2& u) {
    return max_abs(u.adjoint() * u - Mat2::identity());
}

inline bool is_unitary(const Mat2& u, double tol = 1e-12) {
    return unitarity_defect(u) < tol;
}

// Kahan compensated accumulator; keeps reductions stable independent of order.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qwalk
