#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "panseg/random.hpp"
#include "panseg/volume.hpp"

namespace panseg {

// Synthetic abdominal phantom with four structures: pancreas (curved tube
// with a bulbous head), pancreatic duct (thin tube along the pancreas axis,
// draining at the head), common bile duct (descends into the head), and an
// optional tumor (sphere at the head).
//
// Causal structure: a tumor blocks both ducts at the head, so every duct
// segment upstream of it is rendered with its radius scaled by
// duct_dilation_factor, and the duct masks are interrupted inside the tumor.
// Ducts and tumor render at nearly the same (hypodense) HU, so on the CT
// channel alone a normal duct junction and a tumor are easy to confuse;
// the duct mask channels disambiguate.

struct PhantomSpec {
    Dims3 dims{40, 56, 56};
    Vec3 spacing{2.0, 2.0, 2.0};        // mm
    bool tumor_present = false;
    double tumor_radius = 8.0;          // mm
    double tumor_contrast = -42.0;      // HU offset vs pancreas parenchyma
    double duct_dilation_factor = 1.0;  // radius multiplier upstream of tumor
    double base_duct_radius = 2.0;      // mm
    double noise_sigma = 22.0;          // HU
    std::uint64_t seed = 0;

    void validate() const {
        if (tumor_present && !(tumor_radius > 0))
            throw InvalidConfig("PhantomSpec: tumor_radius must be > 0 when tumor_present");
        if (duct_dilation_factor < 1.0)
            throw InvalidConfig("PhantomSpec: duct_dilation_factor must be >= 1");
        if (!(base_duct_radius > 0)) throw InvalidConfig("PhantomSpec: base_duct_radius must be > 0");
        if (noise_sigma < 0) throw InvalidConfig("PhantomSpec: noise_sigma must be >= 0");
    }
};

// Uniform sampling ranges used by generate_dataset. A range with lo > hi is
// invalid; lo == hi pins the parameter.
struct SpecRanges {
    std::pair<double, double> tumor_radius{6.0, 10.0};
    std::pair<double, double> tumor_contrast{-50.0, -34.0};
    std::pair<double, double> duct_dilation_factor{1.9, 2.6};
    std::pair<double, double> base_duct_radius{1.8, 2.2};
    std::pair<double, double> noise_sigma{18.0, 26.0};

    void validate() const {
        auto chk = [](const std::pair<double, double>& r, const char* name) {
            if (r.first > r.second)
                throw InvalidRange(std::string("SpecRanges: inverted range for ") + name);
        };
        chk(tumor_radius, "tumor_radius");
        chk(tumor_contrast, "tumor_contrast");
        chk(duct_dilation_factor, "duct_dilation_factor");
        chk(base_duct_radius, "base_duct_radius");
        chk(noise_sigma, "noise_sigma");
        if (tumor_radius.first <= 0) throw InvalidRange("SpecRanges: tumor_radius must be > 0");
        if (duct_dilation_factor.first < 1)
            throw InvalidRange("SpecRanges: duct_dilation_factor must be >= 1");
    }
};

namespace detail {

struct Pt {
    double z, x, y;
    Pt operator+(const Pt& o) const { return {z + o.z, x + o.x, y + o.y}; }
    Pt operator-(const Pt& o) const { return {z - o.z, x - o.x, y - o.y}; }
    Pt operator*(double s) const { return {z * s, x * s, y * s}; }
    double dot(const Pt& o) const { return z * o.z + x * o.x + y * o.y; }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Paints mask voxels whose centers lie within the capsule around segment
// p0-p1 with linearly interpolated radius r0->r1. Only the capsule's
// bounding box is visited.
inline void paint_capsule(Volume3D& mask, const Pt& p0, const Pt& p1, double r0, double r1) {
    const auto& d = mask.dims();
    const auto& sp = mask.spacing();
    const double rmax = std::max(r0, r1);
    const int z0 = std::max(0, int(std::floor((std::min(p0.z, p1.z) - rmax) / sp.z)));
    const int z1 = std::min(d.z - 1, int(std::ceil((std::max(p0.z, p1.z) + rmax) / sp.z)));
    const int x0 = std::max(0, int(std::floor((std::min(p0.x, p1.x) - rmax) / sp.x)));
    const int x1 = std::min(d.x - 1, int(std::ceil((std::max(p0.x, p1.x) + rmax) / sp.x)));
    const int y0 = std::max(0, int(std::floor((std::min(p0.y, p1.y) - rmax) / sp.y)));
    const int y1 = std::min(d.y - 1, int(std::ceil((std::max(p0.y, p1.y) + rmax) / sp.y)));
    const Pt ab = p1 - p0;
    const double ab2 = std::max(ab.dot(ab), 1e-12);
    for (int z = z0; z <= z1; ++z)
        for (int x = x0; x <= x1; ++x)
            for (int y = y0; y <= y1; ++y) {
                const Pt p{z * sp.z, x * sp.x, y * sp.y};
                double t = (p - p0).dot(ab) / ab2;
                t = std::clamp(t, 0.0, 1.0);
                const Pt q = p0 + ab * t;
                const double r = r0 + (r1 - r0) * t;
                if ((p - q).norm() <= r) mask.at(z, x, y) = 1.0f;
            }
}

inline void paint_sphere(Volume3D& mask, const Pt& c, double r) {
    paint_capsule(mask, c, c, r, r);
}

struct Polyline {
    std::vector<Pt> pts;     // sampled centerline, tail -> head
    std::vector<double> rad; // radius at each point
};

inline void paint_polyline(Volume3D& mask, const Polyline& line) {
    for (std::size_t i = 0; i + 1 < line.pts.size(); ++i)
        paint_capsule(mask, line.pts[i], line.pts[i + 1], line.rad[i], line.rad[i + 1]);
}

// Removes mask voxels inside the sphere (ductal interruption at the tumor).
inline void cut_sphere(Volume3D& mask, const Pt& c, double r) {
    const auto& d = mask.dims();
    const auto& sp = mask.spacing();
    for (int z = 0; z < d.z; ++z)
        for (int x = 0; x < d.x; ++x)
            for (int y = 0; y < d.y; ++y) {
                const Pt p{z * sp.z, x * sp.x, y * sp.y};
                if ((p - c).norm() <= r) mask.at(z, x, y) = 0.0f;
            }
}

inline void paint_masked(Volume3D& ct, const Volume3D& mask, float value) {
    const std::int64_t n = ct.size();
    float* c = ct.data();
    const float* m = mask.data();
    for (std::int64_t i = 0; i < n; ++i)
        if (m[i] != 0.0f) c[i] = value;
}

} // namespace detail

// Tissue render values (HU). Ducts are deliberately close to the default
// tumor intensity (90 - 42 = 48): hypodense fluid and hypodense mass look
// alike on CT.
inline constexpr float kBackgroundHU = 35.0f;
inline constexpr float kPancreasHU = 90.0f;
inline constexpr float kDuctHU = 48.0f;

/// Renders one synthetic labeled case. Deterministic given spec (incl. seed).
inline LabeledCase generate_case(const PhantomSpec& spec) {
    spec.validate();
    const Dims3 d = spec.dims;
    const Vec3 sp = spec.spacing;
    if (d.z < 32 || d.x < 32 || d.y < 32)
        throw DimsTooSmall("generate_case: dims must be >= 32 voxels per axis, got " + d.str());
    const double ez = (d.z - 1) * sp.z, ex = (d.x - 1) * sp.x, ey = (d.y - 1) * sp.y;
    if (ez < 56 || ex < 56 || ey < 56)
        throw DimsTooSmall("generate_case: physical extent must be >= 56 mm per axis");

    using detail::Pt;

    // Independent streams so that flipping tumor_present / dilation leaves
    // anatomy and noise untouched (matched tumor/control renders).
    Rng rng_anat = make_rng(derive_seed(spec.seed, "anatomy"));
    Rng rng_tumor = make_rng(derive_seed(spec.seed, "tumor"));
    Rng rng_noise = make_rng(derive_seed(spec.seed, "noise"));

    const Pt center{ez / 2, ex / 2, ey / 2};
    const Pt cjit{uniform(rng_anat, -3, 3), uniform(rng_anat, -3, 3), uniform(rng_anat, -3, 3)};
    const double bow = uniform(rng_anat, 7, 13);     // y-arch of the pancreas body
    const double tilt = uniform(rng_anat, -8, 8);    // z-slope tail -> head
    const double length = std::clamp(0.62 * ex, 46.0, 95.0);
    const double head_r = std::clamp(0.105 * std::min(ex, ey), 9.0, 13.0);

    const Pt c = center + cjit;
    auto centerline = [&](double t) -> Pt {
        return {c.z + tilt * (t - 0.5),
                c.x + length * (t - 0.5),
                c.y + bow * (std::sin(3.14159265358979 * t) - 2.0 / 3.14159265358979)};
    };
    const Pt head = centerline(1.0);

    const int nseg = 32;
    detail::Polyline pancreas_line, duct_line;
    for (int i = 0; i <= nseg; ++i) {
        const double t = double(i) / nseg;
        pancreas_line.pts.push_back(centerline(t));
        // taper from tail toward the head bulb
        pancreas_line.rad.push_back(head_r * (0.55 + 0.25 * t));
        duct_line.pts.push_back(centerline(t));
        duct_line.rad.push_back(spec.base_duct_radius);
    }

    // CBD: descends from superior (+z) into the head.
    const Pt cbd_top = head + Pt{std::min(0.38 * ez, 30.0), uniform(rng_anat, -8, -3),
                                 uniform(rng_anat, 4, 9)};
    const Pt cbd_mid = (cbd_top + head) * 0.5 + Pt{0, uniform(rng_anat, -3, 3), uniform(rng_anat, -3, 3)};

    const Pt tjit{uniform(rng_tumor, -1.5, 1.5), uniform(rng_tumor, -1.5, 1.5),
                  uniform(rng_tumor, -1.5, 1.5)};
    const Pt tumor_c = head + tjit;

    const bool dilated = spec.tumor_present && spec.duct_dilation_factor > 1.0;
    const double duct_r = spec.base_duct_radius * (spec.tumor_present ? spec.duct_dilation_factor : 1.0);

    Volume3D pancreas(d, sp), pd(d, sp), cbd(d, sp), y(d, sp);

    paint_polyline(pancreas, pancreas_line);
    detail::paint_sphere(pancreas, head, head_r);

    for (auto& r : duct_line.rad) r = duct_r;
    paint_polyline(pd, duct_line);
    detail::paint_capsule(cbd, cbd_top, cbd_mid, duct_r, duct_r);
    detail::paint_capsule(cbd, cbd_mid, head, duct_r, duct_r);

    if (spec.tumor_present) {
        detail::paint_sphere(y, tumor_c, spec.tumor_radius);
        if (!y.any())
            throw InvalidConfig("generate_case: tumor too small to rasterize at this spacing");
        // ductal interruption: the tumor replaces duct tissue inside it
        detail::cut_sphere(pd, tumor_c, spec.tumor_radius);
        detail::cut_sphere(cbd, tumor_c, spec.tumor_radius);
    }

    Volume3D ct(d, sp, {}, kBackgroundHU);
    ct.raw().assign(std::size_t(d.count()), kBackgroundHU);
    detail::paint_masked(ct, pancreas, kPancreasHU);
    detail::paint_masked(ct, pd, kDuctHU);
    detail::paint_masked(ct, cbd, kDuctHU);
    if (spec.tumor_present)
        detail::paint_masked(ct, y, kPancreasHU + float(spec.tumor_contrast));

    for (float& v : ct.raw()) v += float(normal(rng_noise, 0.0, spec.noise_sigma));

    LabeledCase cs;
    cs.x.channels = {std::move(ct), std::move(pancreas), std::move(pd), std::move(cbd)};
    cs.x.channel_names = canonical_channels();
    cs.y = std::move(y);
    cs.is_tumor_case = cs.y.any();

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    cs.metadata["tumor_present"] = spec.tumor_present ? "1" : "0";
    cs.metadata["tumor_radius_mm"] = fmt(spec.tumor_radius);
    cs.metadata["tumor_contrast_hu"] = fmt(spec.tumor_contrast);
    cs.metadata["duct_dilation_factor"] = fmt(spec.duct_dilation_factor);
    cs.metadata["base_duct_radius_mm"] = fmt(spec.base_duct_radius);
    cs.metadata["noise_sigma_hu"] = fmt(spec.noise_sigma);
    cs.metadata["pd_dilated"] = dilated ? "1" : "0";
    cs.metadata["cbd_dilated"] = dilated ? "1" : "0";
    cs.metadata["phantom_seed"] = std::to_string(spec.seed);
    return cs;
}

/// n_tumor tumor cases followed by n_control controls, parameters sampled
/// uniformly from `ranges`. Deterministic given seed; class counts exact.
inline std::vector<LabeledCase> generate_dataset(int n_tumor, int n_control,
                                                 const SpecRanges& ranges, std::uint64_t seed,
                                                 Dims3 dims = {40, 56, 56},
                                                 Vec3 spacing = {2.0, 2.0, 2.0}) {
    if (n_tumor < 0 || n_control < 0)
        throw InvalidRange("generate_dataset: case counts must be >= 0");
    ranges.validate();
    std::vector<LabeledCase> out;
    out.reserve(std::size_t(n_tumor + n_control));
    for (int i = 0; i < n_tumor + n_control; ++i) {
        const bool tumor = i < n_tumor;
        Rng rng = make_rng(derive_seed(seed, "spec", std::uint64_t(i)));
        PhantomSpec s;
        s.dims = dims;
        s.spacing = spacing;
        s.tumor_present = tumor;
        s.tumor_radius = uniform(rng, ranges.tumor_radius.first, ranges.tumor_radius.second);
        s.tumor_contrast = uniform(rng, ranges.tumor_contrast.first, ranges.tumor_contrast.second);
        s.duct_dilation_factor =
            tumor ? uniform(rng, ranges.duct_dilation_factor.first, ranges.duct_dilation_factor.second)
                  : 1.0;
        s.base_duct_radius = uniform(rng, ranges.base_duct_radius.first, ranges.base_duct_radius.second);
        s.noise_sigma = uniform(rng, ranges.noise_sigma.first, ranges.noise_sigma.second);
        s.seed = derive_seed(seed, "case", std::uint64_t(i));

        LabeledCase cs = generate_case(s);
        char id[32];
        std::snprintf(id, sizeof id, "%s_%03d", tumor ? "pdac" : "ctrl", tumor ? i : i - n_tumor);
        cs.case_id = id;
        out.push_back(std::move(cs));
    }
    return out;
}

} // namespace panseg
