#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lapdsm/aperture.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm {

struct Domain {
    double xmin = -1.0;
    double xmax = 1.0;
    double ymin = -1.0;
    double ymax = 1.0;

    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct Disk {
    Vec2 center;
    double radius = 0.0;
};

// Annulus; the hole (|p - center| < inner) is background.
struct Ring {
    Vec2 center;
    double inner = 0.0;
    double outer = 0.0;
};

// Axis-aligned.
struct Rectangle {
    Vec2 center;
    double width = 0.0;
    double height = 0.0;
};

using Shape = std::variant<Disk, Ring, Rectangle>;

struct Scatterer {
    Shape shape;
    double refractive_index = 1.0;

    bool contains(Vec2 p) const;
    double area() const;
    // Axis-aligned bounding box of the support.
    Domain bounds() const;
};

// Immutable experiment description. The constructor validates every
// invariant and throws ValidationError on violation.
class Scene {
public:
    Scene(double wavenumber, Domain domain, std::vector<Scatterer> scatterers,
          std::vector<Vec2> incidences, ApertureSet aperture);

    double wavenumber() const { return wavenumber_; }
    const Domain& domain() const { return domain_; }
    const std::vector<Scatterer>& scatterers() const { return scatterers_; }
    const std::vector<Vec2>& incidences() const { return incidences_; }
    const ApertureSet& aperture() const { return aperture_; }

    Scene with_aperture(ApertureSet aperture) const;

private:
    double wavenumber_;
    Domain domain_;
    std::vector<Scatterer> scatterers_;
    std::vector<Vec2> incidences_;
    ApertureSet aperture_;
};

// Index of the smallest-area scatterer containing the point, 1.0 if none.
double refractive_index_at(const Scene& scene, Vec2 point);

// Row-major lattice of cell centers. Row 0 is the top row (y near ymax),
// column 0 is the left column, so the point order matches raster order.
class SamplingGrid {
public:
    SamplingGrid(Domain domain, int resolution);

    const Domain& domain() const { return domain_; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<Vec2>& points() const { return points_; }
    Vec2 point(std::size_t i) const { return points_[i]; }
    double spacing_x() const { return domain_.width() / resolution_; }
    double spacing_y() const { return domain_.height() / resolution_; }

private:
    Domain domain_;
    int resolution_;
    std::vector<Vec2> points_;
};

// Far-field samples, one row per incidence, columns in receiver order.
struct FarFieldData {
    ApertureSet aperture;
    std::vector<std::vector<Complex>> samples;
    double noise_level = 0.0;
    std::uint64_t seed = 0;

    std::size_t incidence_count() const { return samples.size(); }
};

// u_delta = u + delta * (eta_r + i eta_i) * ||u||_{L2(Gamma)} / |Gamma|^{1/2}
// per receiver. Incidence j draws from CounterRng(seed, j), eta_r before
// eta_i for each receiver in order.
FarFieldData add_noise(const FarFieldData& data, double delta, std::uint64_t seed);

// Built-in experiment geometries on [-1, 1]^2 at k = 8.
namespace presets {

Scene example_1_1();
Scene example_1_2();
Scene example_2_1();
Scene example_2_2();

std::vector<std::string> names();
// Throws ValidationError for an unknown name.
Scene by_name(std::string_view name);

}  // namespace presets

// JSON scene files; keys documented in README.md.
Scene scene_from_json(const std::string& text);
std::string scene_to_json(const Scene& scene);
Scene load_scene(const std::string& path);

}  // namespace lapdsm
