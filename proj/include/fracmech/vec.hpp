#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>

#include "fracmech/errors.hpp"

namespace fracmech {

/// Small fixed-capacity Euclidean vector holding 1 to 3 components.
/// Positions, momenta and velocities all use this type.
class Vec {
public:
    static constexpr std::size_t kMaxDim = 3;

    Vec() = default;

    explicit Vec(std::size_t dim) : dim_(dim) {
        if (dim == 0 || dim > kMaxDim) {
            throw DomainError("vector dimension must be 1, 2 or 3, got " + std::to_string(dim));
        }
    }

    Vec(std::initializer_list<double> values) : Vec(values.size()) {
        std::size_t i = 0;
        for (double v : values) data_[i++] = v;
    }

    static Vec zeros(std::size_t dim) { return Vec(dim); }

    [[nodiscard]] std::size_t size() const { return dim_; }
    [[nodiscard]] bool empty() const { return dim_ == 0; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] const double* begin() const { return data_.data(); }
    [[nodiscard]] const double* end() const { return data_.data() + dim_; }
    double* begin() { return data_.data(); }
    double* end() { return data_.data() + dim_; }

    [[nodiscard]] double dot(const Vec& other) const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += data_[i] * other.data_[i];
        return s;
    }

    // hypot-style accumulation would be overkill at d <= 3.
    [[nodiscard]] double norm() const {
        if (dim_ == 1) return std::abs(data_[0]);
        return std::sqrt(dot(*this));
    }

    Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (std::size_t i = 0; i < dim_; ++i) data_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim_ != b.dim_) return false;
        for (std::size_t i = 0; i < a.dim_; ++i) {
            if (a.data_[i] != b.data_[i]) return false;
        }
        return true;
    }

private:
    std::array<double, kMaxDim> data_{};
    std::size_t dim_ = 0;
};

}  // namespace fracmech
