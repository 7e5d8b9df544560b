#include "lapdsm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lapdsm/errors.hpp"

namespace lapdsm::io {

namespace {

constexpr double kAngleTolerance = 1e-9;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_far_field_csv(std::ostream& out, const FarFieldData& data) {
    const auto angles = data.aperture.receiver_angles();
    out << "incidence_index,theta_radians,re,im\n";
    for (std::size_t j = 0; j < data.samples.size(); ++j) {
        const auto& row = data.samples[j];
        if (row.size() != angles.size()) throw ValidationError("far-field data does not match its aperture");
        for (std::size_t q = 0; q < row.size(); ++q) {
            out << j << ',' << format_number(angles[q]) << ',' << format_number(row[q].real()) << ','
                << format_number(row[q].imag()) << '\n';
        }
    }
}

void save_far_field_csv(const std::string& path, const FarFieldData& data) {
    auto out = open_out(path);
    write_far_field_csv(out, data);
}

FarFieldData read_far_field_csv(std::istream& in, const ApertureSet& aperture) {
    const auto angles = aperture.receiver_angles();
    std::string line;
    if (!std::getline(in, line) || line.rfind("incidence_index,theta_radians,re,im", 0) != 0) {
        throw ValidationError("far-field CSV: missing header");
    }
    FarFieldData data;
    data.aperture = aperture;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::string cell[4];
        for (auto& c : cell) {
            if (!std::getline(ls, c, ',')) throw ValidationError("far-field CSV: short row " + std::to_string(row_number));
        }
        std::size_t index = 0;
        double theta = 0.0, re = 0.0, im = 0.0;
        try {
            index = std::stoul(cell[0]);
            theta = std::stod(cell[1]);
            re = std::stod(cell[2]);
            im = std::stod(cell[3]);
        } catch (const std::exception&) {
            throw ValidationError("far-field CSV: malformed row " + std::to_string(row_number));
        }
        if (index == data.samples.size()) data.samples.emplace_back();
        if (index + 1 != data.samples.size()) {
            throw ValidationError("far-field CSV: incidence indices must be contiguous (row " +
                                  std::to_string(row_number) + ")");
        }
        auto& samples = data.samples.back();
        if (samples.size() >= angles.size() || std::abs(angles[samples.size()] - theta) > kAngleTolerance) {
            throw ValidationError("far-field CSV: angle at row " + std::to_string(row_number) +
                                  " does not match the aperture receivers");
        }
        samples.emplace_back(re, im);
    }
    if (data.samples.empty()) throw ValidationError("far-field CSV: no samples");
    for (const auto& s : data.samples) {
        if (s.size() != angles.size()) throw ValidationError("far-field CSV: incomplete incidence");
    }
    return data;
}

FarFieldData load_far_field_csv(const std::string& path, const ApertureSet& aperture) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return read_far_field_csv(in, aperture);
}

void write_index_csv(std::ostream& out, const IndexField& field) {
    out << "x,y,value\n";
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const Vec2 p = field.grid.point(i);
        out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(field.values[i]) << '\n';
    }
}

void write_pgm(std::ostream& out, const IndexField& field) {
    const int n = field.grid.resolution();
    const double peak = field.max();
    if (!(peak > 0.0) || !std::isfinite(peak)) throw NumericalError("pgm: field has no positive maximum");
    out << "P2\n" << n << ' ' << n << "\n255\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double v = field.values[static_cast<std::size_t>(r) * n + c] / peak;
            out << (c ? " " : "") << static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
        }
        out << '\n';
    }
}

void save_index(const std::string& prefix, const IndexField& field) {
    {
        auto out = open_out(prefix + ".csv");
        write_index_csv(out, field);
    }
    auto out = open_out(prefix + ".pgm");
    write_pgm(out, field);
}

void save_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

}  // namespace lapdsm::io
