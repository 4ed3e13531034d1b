#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "homcover/errors.hpp"

namespace homcover {

using Point = std::vector<double>;
using ConstVec = std::span<const double>;

inline double dot(ConstVec a, ConstVec b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(ConstVec a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(ConstVec a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline Point axpy(ConstVec base, double t, ConstVec dir) {
    Point out(base.begin(), base.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * dir[i];
    return out;
}

inline Point scaled(ConstVec a, double s) {
    Point out(a.begin(), a.end());
    for (double& v : out) v *= s;
    return out;
}

inline Point difference(ConstVec a, ConstVec b) {
    Point out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

inline void require_dim(ConstVec p, std::size_t dim, const char* what) {
    if (p.size() != dim) {
        throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                         ", got " + std::to_string(p.size()));
    }
}

/// Flat, row-major storage for many points of one dimension.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }

    ConstVec operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> mutable_at(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

    void push_back(ConstVec p) {
        require_dim(p, dim_, "PointSet::push_back");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }
    void append(const PointSet& other) {
        coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
    }
    void reserve(std::size_t n) { coords_.reserve(n * dim_); }

    Point point(std::size_t i) const {
        auto v = (*this)[i];
        return {v.begin(), v.end()};
    }

    const std::vector<double>& raw() const { return coords_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Axis-aligned box [lo_j, hi_j].
struct Box {
    Point lo;
    Point hi;

    std::size_t dim() const { return lo.size(); }
    double volume() const {
        double v = 1.0;
        for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
        return v;
    }
};

}  // namespace homcover
