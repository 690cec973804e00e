#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panseg/common.hpp"

namespace panseg {

// Axis order is (z, x, y) throughout: dims.z slices, each a dims.x by dims.y
// plane, y fastest in memory.

struct Dims3 {
    int z = 0, x = 0, y = 0;

    std::int64_t count() const { return std::int64_t(z) * x * y; }
    bool operator==(const Dims3&) const = default;
    int operator[](int a) const { return a == 0 ? z : (a == 1 ? x : y); }
    int& operator[](int a) { return a == 0 ? z : (a == 1 ? x : y); }
    std::string str() const {
        return "(" + std::to_string(z) + ", " + std::to_string(x) + ", " + std::to_string(y) + ")";
    }
};

struct Vec3 {
    double z = 0, x = 0, y = 0;

    bool operator==(const Vec3&) const = default;
    double operator[](int a) const { return a == 0 ? z : (a == 1 ? x : y); }
    double& operator[](int a) { return a == 0 ? z : (a == 1 ? x : y); }
    Vec3 operator+(const Vec3& o) const { return {z + o.z, x + o.x, y + o.y}; }
    Vec3 operator-(const Vec3& o) const { return {z - o.z, x - o.x, y - o.y}; }
    Vec3 operator*(double s) const { return {z * s, x * s, y * s}; }
};

/// A scalar 3D grid with physical voxel spacing (mm). Holds CT intensities
/// (Hounsfield-like units) or {0,1} masks.
class Volume3D {
public:
    Volume3D() = default;

    Volume3D(Dims3 dims, Vec3 spacing, Vec3 origin = {}, float fill = 0.0f)
        : dims_(dims), spacing_(spacing), origin_(origin), data_(std::size_t(dims.count()), fill) {
        validate();
    }

    Volume3D(Dims3 dims, Vec3 spacing, std::vector<float> data, Vec3 origin = {})
        : dims_(dims), spacing_(spacing), origin_(origin), data_(std::move(data)) {
        validate();
        if (std::int64_t(data_.size()) != dims_.count())
            throw ShapeMismatch("Volume3D: data size " + std::to_string(data_.size()) +
                                " does not match dims " + dims_.str());
    }

    const Dims3& dims() const { return dims_; }
    const Vec3& spacing() const { return spacing_; }
    const Vec3& origin() const { return origin_; }
    void set_origin(Vec3 o) { origin_ = o; }

    std::int64_t size() const { return dims_.count(); }

    std::int64_t index(int z, int x, int y) const {
        return (std::int64_t(z) * dims_.x + x) * dims_.y + y;
    }

    float& at(int z, int x, int y) { return data_[index(z, x, y)]; }
    float at(int z, int x, int y) const { return data_[index(z, x, y)]; }

    float* data() { return data_.data(); }
    const float* data() const { return data_.data(); }
    std::vector<float>& raw() { return data_; }
    const std::vector<float>& raw() const { return data_; }

    bool same_grid(const Volume3D& o) const {
        return dims_ == o.dims_ && spacing_ == o.spacing_;
    }

    bool is_binary() const {
        for (float v : data_)
            if (v != 0.0f && v != 1.0f) return false;
        return true;
    }

    std::int64_t nonzero_count() const {
        std::int64_t n = 0;
        for (float v : data_) n += (v != 0.0f);
        return n;
    }

    bool any() const {
        for (float v : data_)
            if (v != 0.0f) return true;
        return false;
    }

private:
    void validate() const {
        if (dims_.z < 1 || dims_.x < 1 || dims_.y < 1)
            throw InvalidConfig("Volume3D: all dimensions must be >= 1, got " + dims_.str());
        if (!(spacing_.z > 0 && spacing_.x > 0 && spacing_.y > 0))
            throw InvalidSpacing("Volume3D: spacing components must be > 0");
    }

    Dims3 dims_;
    Vec3 spacing_{1, 1, 1};
    Vec3 origin_;
    std::vector<float> data_;
};

/// Ordered stack of same-grid channels (e.g. ct, pancreas, pancreatic_duct,
/// common_bile_duct).
struct MultiChannelVolume {
    std::vector<Volume3D> channels;
    std::vector<std::string> channel_names;

    int channel_count() const { return int(channels.size()); }

    const Volume3D& channel(const std::string& name) const {
        for (std::size_t i = 0; i < channel_names.size(); ++i)
            if (channel_names[i] == name) return channels[i];
        throw MissingChannel("no channel named '" + name + "'");
    }

    bool has_channel(const std::string& name) const {
        for (const auto& n : channel_names)
            if (n == name) return true;
        return false;
    }

    void validate() const {
        if (channels.size() != channel_names.size())
            throw InvalidConfig("MultiChannelVolume: channel count != name count");
        for (std::size_t i = 1; i < channels.size(); ++i)
            if (!channels[i].same_grid(channels[0]))
                throw ShapeMismatch("MultiChannelVolume: channel '" + channel_names[i] +
                                    "' grid differs from '" + channel_names[0] + "'");
    }
};

/// One training/evaluation sample: input channels x, binary tumor label y.
struct LabeledCase {
    MultiChannelVolume x;
    Volume3D y;
    std::string case_id;
    bool is_tumor_case = false;
    std::map<std::string, std::string> metadata;

    void validate() const {
        x.validate();
        if (x.channels.empty()) throw MissingChannel("LabeledCase: no input channels");
        if (y.dims() != x.channels[0].dims())
            throw ShapeMismatch("LabeledCase '" + case_id + "': label dims " + y.dims().str() +
                                " != input dims " + x.channels[0].dims().str());
        if (is_tumor_case != y.any())
            throw InvalidConfig("LabeledCase '" + case_id +
                                "': is_tumor_case inconsistent with label content");
    }
};

// canonical channel names, in stacking order
inline const std::vector<std::string>& canonical_channels() {
    static const std::vector<std::string> names = {"ct", "pancreas", "pancreatic_duct",
                                                   "common_bile_duct"};
    return names;
}

// ── Metric kernels ──────────────────────────────────────────────────────────

/// Unweighted mean coordinate of nonzero voxels, in (z, x, y) voxel units.
inline Vec3 center_of_mass(const Volume3D& mask) {
    double sz = 0, sx = 0, sy = 0;
    std::int64_t n = 0;
    const auto& d = mask.dims();
    const float* p = mask.data();
    for (int z = 0; z < d.z; ++z)
        for (int x = 0; x < d.x; ++x)
            for (int y = 0; y < d.y; ++y, ++p)
                if (*p != 0.0f) {
                    sz += z;
                    sx += x;
                    sy += y;
                    ++n;
                }
    if (n == 0) throw EmptyMask("center_of_mass: mask is all-zero");
    return {sz / n, sx / n, sy / n};
}

/// Sorensen-Dice overlap 2|A∩B| / (|A|+|B|); 1.0 when both masks are empty.
inline double dice(const Volume3D& a, const Volume3D& b) {
    if (a.dims() != b.dims())
        throw ShapeMismatch("dice: dims " + a.dims().str() + " vs " + b.dims().str());
    std::int64_t inter = 0, na = 0, nb = 0;
    const float* pa = a.data();
    const float* pb = b.data();
    const std::int64_t n = a.size();
    for (std::int64_t i = 0; i < n; ++i) {
        const bool va = pa[i] != 0.0f, vb = pb[i] != 0.0f;
        inter += (va && vb);
        na += va;
        nb += vb;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * double(inter) / double(na + nb);
}

/// True iff the masks share at least one voxel ("even partially").
inline bool overlaps(const Volume3D& a, const Volume3D& b) {
    if (a.dims() != b.dims())
        throw ShapeMismatch("overlaps: dims " + a.dims().str() + " vs " + b.dims().str());
    const float* pa = a.data();
    const float* pb = b.data();
    const std::int64_t n = a.size();
    for (std::int64_t i = 0; i < n; ++i)
        if (pa[i] != 0.0f && pb[i] != 0.0f) return true;
    return false;
}

} // namespace panseg
