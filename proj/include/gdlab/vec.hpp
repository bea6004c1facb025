#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace gdlab {

/// Maximum spatial dimension supported by the fixed-capacity point types.
inline constexpr int kMaxDim = 8;

/// Point in R^d. Fixed capacity, no heap allocation; d is runtime.
struct PointR {
    std::array<double, kMaxDim> c{};
    int d = 0;

    PointR() = default;
    explicit PointR(int dim) : d(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("PointR: bad dimension");
    }
    static PointR zero(int dim) { return PointR(dim); }
    static PointR unit(int dim, int axis) {
        PointR p(dim);
        p.c[static_cast<size_t>(axis)] = 1.0;
        return p;
    }

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < d; ++i) s += c[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    PointR& operator+=(const PointR& o) {
        for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] += o.c[static_cast<size_t>(i)];
        return *this;
    }
    PointR& operator-=(const PointR& o) {
        for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] -= o.c[static_cast<size_t>(i)];
        return *this;
    }
    PointR& operator*=(double s) {
        for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] *= s;
        return *this;
    }
    friend PointR operator+(PointR a, const PointR& b) { return a += b; }
    friend PointR operator-(PointR a, const PointR& b) { return a -= b; }
    friend PointR operator*(double s, PointR a) { return a *= s; }

    friend double dot(const PointR& a, const PointR& b) {
        double s = 0;
        for (int i = 0; i < a.d; ++i) s += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(i)];
        return s;
    }

    /// x/|x|; throws for the zero vector.
    PointR normalized() const {
        double n = norm();
        if (n <= 0) throw std::invalid_argument("normalized: zero vector");
        PointR p(d);
        for (int i = 0; i < d; ++i) p.c[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] / n;
        return p;
    }
};

/// Lattice point in Z^d.
struct PointZ {
    std::array<int32_t, kMaxDim> c{};
    int d = 0;

    PointZ() = default;
    explicit PointZ(int dim) : d(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("PointZ: bad dimension");
    }
    static PointZ zero(int dim) { return PointZ(dim); }
    static PointZ unit(int dim, int axis, int32_t sign = 1) {
        PointZ p(dim);
        p.c[static_cast<size_t>(axis)] = sign;
        return p;
    }

    int32_t& operator[](int i) { return c[static_cast<size_t>(i)]; }
    int32_t operator[](int i) const { return c[static_cast<size_t>(i)]; }

    int64_t norm2() const {
        int64_t s = 0;
        for (int i = 0; i < d; ++i) {
            int64_t v = c[static_cast<size_t>(i)];
            s += v * v;
        }
        return s;
    }
    int64_t norm1() const {
        int64_t s = 0;
        for (int i = 0; i < d; ++i) s += std::abs(static_cast<int64_t>(c[static_cast<size_t>(i)]));
        return s;
    }

    bool operator==(const PointZ& o) const {
        if (d != o.d) return false;
        for (int i = 0; i < d; ++i)
            if (c[static_cast<size_t>(i)] != o.c[static_cast<size_t>(i)]) return false;
        return true;
    }
    bool operator!=(const PointZ& o) const { return !(*this == o); }

    PointZ shifted(int axis, int32_t delta) const {
        PointZ p = *this;
        p.c[static_cast<size_t>(axis)] += delta;
        return p;
    }

    PointR to_real() const {
        PointR p(d);
        for (int i = 0; i < d; ++i) p.c[static_cast<size_t>(i)] = c[static_cast<size_t>(i)];
        return p;
    }
};

struct PointZHash {
    size_t operator()(const PointZ& p) const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<uint64_t>(p.d);
        for (int i = 0; i < p.d; ++i) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(p.c[static_cast<size_t>(i)])) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<size_t>(h ^ (h >> 33));
    }
};

/// Small dense d x d matrix, row-major.
struct MatD {
    std::array<double, kMaxDim * kMaxDim> m{};
    int d = 0;

    explicit MatD(int dim) : d(dim) {}
    static MatD identity(int dim) {
        MatD a(dim);
        for (int i = 0; i < dim; ++i) a(i, i) = 1.0;
        return a;
    }
    double& operator()(int i, int j) { return m[static_cast<size_t>(i * d + j)]; }
    double operator()(int i, int j) const { return m[static_cast<size_t>(i * d + j)]; }

    PointR apply(const PointR& x) const {
        PointR y(d);
        for (int i = 0; i < d; ++i) {
            double s = 0;
            for (int j = 0; j < d; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    MatD transpose() const {
        MatD a(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = (*this)(j, i);
        return a;
    }

    friend MatD operator*(const MatD& a, const MatD& b) {
        MatD r(a.d);
        for (int i = 0; i < a.d; ++i)
            for (int k = 0; k < a.d; ++k) {
                double v = a(i, k);
                for (int j = 0; j < a.d; ++j) r(i, j) += v * b(k, j);
            }
        return r;
    }
};

}  // namespace gdlab
