#include "lapdsm/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"
#include "lapdsm/rng.hpp"

namespace lapdsm {

// ---------------------------------------------------------------------------
// ApertureSet

ApertureSet::ApertureSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
    if (arcs_.empty()) throw ValidationError("aperture: at least one arc is required");
    double total = 0.0;
    for (const Arc& a : arcs_) {
        if (!(a.alpha > 0.0 && a.alpha <= kPi)) {
            throw ValidationError("aperture: alpha must lie in (0, pi]");
        }
        if (!(a.beta > -kPi - 1e-12 && a.beta <= kPi + 1e-12)) {
            throw ValidationError("aperture: beta must lie in (-pi, pi]");
        }
        if (a.receivers <= 0) throw ValidationError("aperture: receivers must be positive");
        total += 2.0 * a.alpha;
    }
    if (total > 2.0 * kPi + 1e-12) throw ValidationError("aperture: total measure exceeds 2 pi");
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        for (std::size_t j = i + 1; j < arcs_.size(); ++j) {
            const double gap = std::abs(std::remainder(arcs_[i].beta - arcs_[j].beta, 2.0 * kPi));
            if (gap < arcs_[i].alpha + arcs_[j].alpha - 1e-12) {
                throw ValidationError("aperture: arcs " + std::to_string(i) + " and " +
                                      std::to_string(j) + " overlap");
            }
        }
    }
}

ApertureSet ApertureSet::full_circle(int receivers) {
    return ApertureSet({Arc{kPi, 0.0, receivers}});
}

ApertureSet ApertureSet::config_one(int receivers) {
    return ApertureSet({Arc{2.0 * kPi / 5.0, 0.0, receivers}});
}

ApertureSet ApertureSet::config_two(int receivers_per_arc) {
    const double a = kPi / 8.0;
    return ApertureSet({Arc{a, 0.0, receivers_per_arc},
                        Arc{a, 2.0 * kPi / 3.0, receivers_per_arc},
                        Arc{a, -2.0 * kPi / 3.0, receivers_per_arc}});
}

int ApertureSet::total_receivers() const {
    int n = 0;
    for (const Arc& a : arcs_) n += a.receivers;
    return n;
}

double ApertureSet::measure() const {
    double m = 0.0;
    for (const Arc& a : arcs_) m += 2.0 * a.alpha;
    return m;
}

bool ApertureSet::is_full_circle() const {
    return std::abs(measure() - 2.0 * kPi) < 1e-12;
}

std::vector<double> ApertureSet::receiver_angles() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(total_receivers()));
    for (const Arc& a : arcs_) {
        const double step = 2.0 * a.alpha / a.receivers;
        for (int j = 0; j < a.receivers; ++j) {
            out.push_back(a.beta - a.alpha + (j + 0.5) * step);
        }
    }
    return out;
}

std::vector<double> ApertureSet::weights() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(total_receivers()));
    for (const Arc& a : arcs_) out.insert(out.end(), a.receivers, 2.0 * a.alpha / a.receivers);
    return out;
}

// ---------------------------------------------------------------------------
// Scatterers and scenes

namespace {

struct ContainsVisitor {
    Vec2 p;
    bool operator()(const Disk& d) const { return norm(p - d.center) <= d.radius; }
    bool operator()(const Ring& r) const {
        const double dist = norm(p - r.center);
        return dist >= r.inner && dist <= r.outer;
    }
    bool operator()(const Rectangle& r) const {
        return std::abs(p.x - r.center.x) <= 0.5 * r.width &&
               std::abs(p.y - r.center.y) <= 0.5 * r.height;
    }
};

struct AreaVisitor {
    double operator()(const Disk& d) const { return kPi * d.radius * d.radius; }
    double operator()(const Ring& r) const { return kPi * (r.outer * r.outer - r.inner * r.inner); }
    double operator()(const Rectangle& r) const { return r.width * r.height; }
};

struct BoundsVisitor {
    Domain operator()(const Disk& d) const {
        return {d.center.x - d.radius, d.center.x + d.radius, d.center.y - d.radius,
                d.center.y + d.radius};
    }
    Domain operator()(const Ring& r) const {
        return {r.center.x - r.outer, r.center.x + r.outer, r.center.y - r.outer,
                r.center.y + r.outer};
    }
    Domain operator()(const Rectangle& r) const {
        return {r.center.x - 0.5 * r.width, r.center.x + 0.5 * r.width,
                r.center.y - 0.5 * r.height, r.center.y + 0.5 * r.height};
    }
};

void validate_scatterer(const Scatterer& s) {
    if (!(s.refractive_index > 0.0)) throw ValidationError("scatterer: refractive index must be > 0");
    if (s.refractive_index == 1.0) throw ValidationError("scatterer: refractive index 1 has no contrast");
    std::visit(
        [](const auto& shape) {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Disk>) {
                if (!(shape.radius > 0.0)) throw ValidationError("disk: radius must be positive");
            } else if constexpr (std::is_same_v<T, Ring>) {
                if (!(shape.inner > 0.0) || !(shape.outer > shape.inner)) {
                    throw ValidationError("ring: need 0 < inner < outer");
                }
            } else {
                if (!(shape.width > 0.0) || !(shape.height > 0.0)) {
                    throw ValidationError("rectangle: width and height must be positive");
                }
            }
        },
        s.shape);
}

}  // namespace

bool Scatterer::contains(Vec2 p) const { return std::visit(ContainsVisitor{p}, shape); }
double Scatterer::area() const { return std::visit(AreaVisitor{}, shape); }
Domain Scatterer::bounds() const { return std::visit(BoundsVisitor{}, shape); }

Scene::Scene(double wavenumber, Domain domain, std::vector<Scatterer> scatterers,
             std::vector<Vec2> incidences, ApertureSet aperture)
    : wavenumber_(wavenumber),
      domain_(domain),
      scatterers_(std::move(scatterers)),
      incidences_(std::move(incidences)),
      aperture_(std::move(aperture)) {
    if (!(wavenumber_ > 0.0)) throw ValidationError("scene: wavenumber must be positive");
    if (!(domain_.xmax > domain_.xmin) || !(domain_.ymax > domain_.ymin)) {
        throw ValidationError("scene: empty domain");
    }
    if (aperture_.arcs().empty()) throw ValidationError("scene: aperture has no arcs");
    for (const Scatterer& s : scatterers_) {
        validate_scatterer(s);
        const Domain b = s.bounds();
        if (b.xmin < domain_.xmin - 1e-12 || b.xmax > domain_.xmax + 1e-12 ||
            b.ymin < domain_.ymin - 1e-12 || b.ymax > domain_.ymax + 1e-12) {
            throw ValidationError("scene: scatterer support leaves the domain");
        }
    }
    for (const Vec2& d : incidences_) {
        if (std::abs(norm(d) - 1.0) > 1e-9) throw ValidationError("scene: incidence is not a unit vector");
    }
}

Scene Scene::with_aperture(ApertureSet aperture) const {
    return Scene(wavenumber_, domain_, scatterers_, incidences_, std::move(aperture));
}

double refractive_index_at(const Scene& scene, Vec2 point) {
    double best_area = 0.0;
    double index = 1.0;
    for (const Scatterer& s : scene.scatterers()) {
        if (!s.contains(point)) continue;
        const double a = s.area();
        if (index == 1.0 || a < best_area) {
            best_area = a;
            index = s.refractive_index;
        }
    }
    return index;
}

SamplingGrid::SamplingGrid(Domain domain, int resolution) : domain_(domain), resolution_(resolution) {
    if (resolution <= 0) throw ValidationError("grid: resolution must be positive");
    const double hx = domain.width() / resolution;
    const double hy = domain.height() / resolution;
    points_.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            points_.push_back({domain.xmin + (c + 0.5) * hx, domain.ymax - (r + 0.5) * hy});
        }
    }
}

FarFieldData add_noise(const FarFieldData& data, double delta, std::uint64_t seed) {
    if (!(delta >= 0.0)) throw ValidationError("add_noise: delta must be non-negative");
    FarFieldData out = data;
    out.noise_level = delta;
    out.seed = seed;
    if (delta == 0.0) return out;
    const double root_measure = std::sqrt(data.aperture.measure());
    for (std::size_t j = 0; j < out.samples.size(); ++j) {
        auto& row = out.samples[j];
        const double scale = delta * arc_norm(row, data.aperture) / root_measure;
        CounterRng rng(seed, j);
        for (Complex& u : row) {
            const double er = rng.normal();
            const double ei = rng.normal();
            u += scale * Complex{er, ei};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace presets {

namespace {
constexpr double kWavenumber = 8.0;
const Domain kUnitBox{-1.0, 1.0, -1.0, 1.0};
}  // namespace

Scene example_1_1() {
    std::vector<Scatterer> s;
    for (double cx : {-0.8, 0.0, 0.8}) s.push_back({Disk{{cx, -0.4}, 0.15}, 2.0});
    return Scene(kWavenumber, kUnitBox, std::move(s), {{1.0, 0.0}}, ApertureSet::config_one());
}

Scene example_1_2() {
    std::vector<Scatterer> s{{Ring{{0.2, -0.2}, 0.3, 0.4}, 2.0}};
    return Scene(kWavenumber, kUnitBox, std::move(s), {{1.0, 0.0}, {0.0, 1.0}},
                 ApertureSet::config_one());
}

Scene example_2_1() {
    std::vector<Scatterer> s{{Disk{{-0.6, -0.6}, 0.15}, 2.0}, {Disk{{-0.2, -0.2}, 0.15}, 2.0}};
    return Scene(kWavenumber, kUnitBox, std::move(s), {{1.0, 0.0}}, ApertureSet::config_two());
}

// Rectangle sizes and positions are a shipped default, not given geometry.
Scene example_2_2() {
    std::vector<Scatterer> s{{Rectangle{{-0.45, 0.45}, 0.5, 0.3}, 2.0},
                             {Rectangle{{0.45, -0.45}, 0.5, 0.3}, 2.0}};
    const double h = std::sqrt(3.0) / 2.0;
    return Scene(kWavenumber, kUnitBox, std::move(s), {{1.0, 0.0}, {-0.5, h}, {-0.5, -h}},
                 ApertureSet::config_two());
}

std::vector<std::string> names() { return {"ex1_1", "ex1_2", "ex2_1", "ex2_2"}; }

Scene by_name(std::string_view name) {
    if (name == "ex1_1") return example_1_1();
    if (name == "ex1_2") return example_1_2();
    if (name == "ex2_1") return example_2_1();
    if (name == "ex2_2") return example_2_2();
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

}  // namespace presets

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

Vec2 read_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError(std::string("scene file: ") + what + " must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Scene scene_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene file: ") + e.what());
    }
    try {
        const double k = doc.at("wavenumber").get<double>();
        const json& dj = doc.at("domain");
        const Domain domain{dj.at("xmin").get<double>(), dj.at("xmax").get<double>(),
                            dj.at("ymin").get<double>(), dj.at("ymax").get<double>()};
        std::vector<Scatterer> scatterers;
        for (const json& sj : doc.value("scatterers", json::array())) {
            const std::string type = sj.at("type").get<std::string>();
            const Vec2 c = read_vec2(sj.at("center"), "center");
            const double n = sj.at("n").get<double>();
            if (type == "disk") {
                scatterers.push_back({Disk{c, sj.at("radius").get<double>()}, n});
            } else if (type == "ring") {
                scatterers.push_back(
                    {Ring{c, sj.at("inner").get<double>(), sj.at("outer").get<double>()}, n});
            } else if (type == "rectangle") {
                scatterers.push_back(
                    {Rectangle{c, sj.at("width").get<double>(), sj.at("height").get<double>()}, n});
            } else {
                throw ValidationError("scene file: unknown scatterer type '" + type + "'");
            }
        }
        std::vector<Vec2> incidences;
        for (const json& d : doc.at("incidences")) incidences.push_back(read_vec2(d, "incidence"));
        std::vector<Arc> arcs;
        for (const json& a : doc.at("aperture").at("arcs")) {
            arcs.push_back({a.at("alpha").get<double>(), a.at("beta").get<double>(),
                            a.at("receivers").get<int>()});
        }
        return Scene(k, domain, std::move(scatterers), std::move(incidences),
                     ApertureSet(std::move(arcs)));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene file: ") + e.what());
    }
}

std::string scene_to_json(const Scene& scene) {
    json doc;
    doc["wavenumber"] = scene.wavenumber();
    const Domain& d = scene.domain();
    doc["domain"] = {{"xmin", d.xmin}, {"xmax", d.xmax}, {"ymin", d.ymin}, {"ymax", d.ymax}};
    json scatterers = json::array();
    for (const Scatterer& s : scene.scatterers()) {
        json sj = std::visit(
            [](const auto& shape) -> json {
                using T = std::decay_t<decltype(shape)>;
                json out;
                out["center"] = {shape.center.x, shape.center.y};
                if constexpr (std::is_same_v<T, Disk>) {
                    out["type"] = "disk";
                    out["radius"] = shape.radius;
                } else if constexpr (std::is_same_v<T, Ring>) {
                    out["type"] = "ring";
                    out["inner"] = shape.inner;
                    out["outer"] = shape.outer;
                } else {
                    out["type"] = "rectangle";
                    out["width"] = shape.width;
                    out["height"] = shape.height;
                }
                return out;
            },
            s.shape);
        sj["n"] = s.refractive_index;
        scatterers.push_back(std::move(sj));
    }
    doc["scatterers"] = std::move(scatterers);
    json inc = json::array();
    for (const Vec2& v : scene.incidences()) inc.push_back({v.x, v.y});
    doc["incidences"] = std::move(inc);
    json arcs = json::array();
    for (const Arc& a : scene.aperture().arcs()) {
        arcs.push_back({{"alpha", a.alpha}, {"beta", a.beta}, {"receivers", a.receivers}});
    }
    doc["aperture"] = {{"arcs", std::move(arcs)}};
    return doc.dump(2);
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scene file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return scene_from_json(buffer.str());
}

}  // namespace lapdsm
