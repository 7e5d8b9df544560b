#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lapdsm/errors.hpp"
#include "lapdsm/io.hpp"

using namespace lapdsm;

namespace {

FarFieldData random_field_data(const ApertureSet& ap, int incidences, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    FarFieldData d{ap, {}, 0.0, 0};
    for (int j = 0; j < incidences; ++j) {
        d.samples.emplace_back();
        for (int q = 0; q < ap.total_receivers(); ++q) d.samples.back().push_back({nd(gen), nd(gen)});
    }
    return d;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(FarFieldCsv, RoundTripIsExact) {
    const auto ap = ApertureSet::config_two(7);
    const auto data = random_field_data(ap, 3, 4);
    std::stringstream s;
    io::write_far_field_csv(s, data);
    const auto back = io::read_far_field_csv(s, ap);
    ASSERT_EQ(back.samples.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.samples[j], data.samples[j]);
}

TEST(FarFieldCsv, RowsPerIncidenceAndHeader) {
    const auto ap = ApertureSet::config_one(100);
    std::stringstream s;
    io::write_far_field_csv(s, random_field_data(ap, 2, 1));
    const auto ls = lines(s.str());
    ASSERT_EQ(ls.size(), 201u);
    EXPECT_EQ(ls[0], "incidence_index,theta_radians,re,im");
    EXPECT_EQ(ls[100].substr(0, 2), "0,");
    EXPECT_EQ(ls[101].substr(0, 2), "1,");
}

TEST(FarFieldCsv, RejectsApertureMismatch) {
    std::stringstream s;
    io::write_far_field_csv(s, random_field_data(ApertureSet::config_one(100), 1, 2));
    EXPECT_THROW(io::read_far_field_csv(s, ApertureSet::config_one(99)), ValidationError);
    std::stringstream t;
    io::write_far_field_csv(t, random_field_data(ApertureSet::config_one(100), 1, 2));
    EXPECT_THROW(io::read_far_field_csv(t, ApertureSet::config_one(101)), ValidationError);
}

TEST(FarFieldCsv, RejectsMalformedInput) {
    const auto ap = ApertureSet::full_circle(2);
    std::istringstream no_header("0,1,2,3\n");
    EXPECT_THROW(io::read_far_field_csv(no_header, ap), ValidationError);
    std::istringstream empty("incidence_index,theta_radians,re,im\n");
    EXPECT_THROW(io::read_far_field_csv(empty, ap), ValidationError);
    std::istringstream gap("incidence_index,theta_radians,re,im\n1,0,0,0\n");
    EXPECT_THROW(io::read_far_field_csv(gap, ap), ValidationError);
    std::istringstream junk("incidence_index,theta_radians,re,im\n0,abc,0,0\n");
    EXPECT_THROW(io::read_far_field_csv(junk, ap), ValidationError);
}

TEST(IndexCsv, RasterOrderAndValues) {
    const SamplingGrid g(Domain{-1, 1, -1, 1}, 2);
    const IndexField f{g, {0.25, 0.5, 0.75, 1.0}, true};
    std::stringstream s;
    io::write_index_csv(s, f);
    const auto ls = lines(s.str());
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "x,y,value");
    EXPECT_EQ(ls[1], "-0.5,0.5,0.25");
    EXPECT_EQ(ls[4], "0.5,-0.5,1");
}

TEST(Pgm, ScalesMaximumTo255) {
    const SamplingGrid g(Domain{-1, 1, -1, 1}, 2);
    const IndexField f{g, {0.0, 2.0, 1.0, 4.0}, false};
    std::stringstream s;
    io::write_pgm(s, f);
    EXPECT_EQ(s.str(), "P2\n2 2\n255\n0 128\n64 255\n");
}

TEST(Pgm, RejectsZeroField) {
    const SamplingGrid g(Domain{-1, 1, -1, 1}, 2);
    std::stringstream s;
    EXPECT_THROW(io::write_pgm(s, IndexField{g, {0, 0, 0, 0}, false}), NumericalError);
}

TEST(FormatNumber, RoundTrips) {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(gen);
        EXPECT_EQ(std::stod(io::format_number(v)), v);
    }
}
