#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lapdsm/errors.hpp"
#include "lapdsm/numerics.hpp"
#include "oracles.hpp"

using namespace lapdsm;

TEST(BesselJ, ValuesAtZero) {
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1, 0.0), 0.0);
    EXPECT_EQ(bessel_j(37, 0.0), 0.0);
}

TEST(BesselJ, MatchesPowerSeriesAtOne) {
    EXPECT_NEAR(bessel_j(0, 1.0), oracle::series_j(0, 1.0), 1e-15);
    EXPECT_NEAR(bessel_j(0, 1.0), 0.7651976865579666, 1e-15);
}

TEST(BesselJ, FirstZeroFromBisection) {
    const double zero = oracle::bisect([](double x) { return oracle::series_j(0, x); }, 2.0, 3.0);
    EXPECT_NEAR(zero, 2.404825557695773, 1e-12);
    EXPECT_NEAR(bessel_j(0, 2.404825557695773), 0.0, 1e-10);
}

TEST(BesselJ, AgreesWithSeriesForModerateArguments) {
    for (int n : {0, 1, 2, 5, 10, 20}) {
        for (double x : {0.1, 0.5, 1.5, 3.0, 7.0, 11.3}) {
            EXPECT_NEAR(bessel_j(n, x), oracle::series_j(n, x), 1e-12) << "n=" << n << " x=" << x;
        }
    }
}

TEST(BesselJ, AgreesWithStandardLibraryOnRange) {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<int> order(0, 200);
    std::uniform_real_distribution<double> arg(0.0, 400.0);
    for (int i = 0; i < 2000; ++i) {
        const int n = order(gen);
        const double x = arg(gen);
        EXPECT_NEAR(bessel_j(n, x), std::cyl_bessel_j(n, x), 1e-12) << "n=" << n << " x=" << x;
    }
    for (double x : {1000.0, 2500.5, 9999.0, 1e4}) {
        for (int n : {0, 1, 50, 200}) EXPECT_NEAR(bessel_j(n, x), std::cyl_bessel_j(n, x), 1e-12);
    }
}

TEST(BesselJ, SequenceMatchesScalar) {
    for (double x : {0.0, 0.3, 5.0, 33.0, 150.0}) {
        const auto seq = bessel_j_sequence(60, x);
        ASSERT_EQ(seq.size(), 61u);
        for (int n = 0; n <= 60; ++n) EXPECT_NEAR(seq[n], bessel_j(n, x), 1e-14);
    }
}

TEST(BesselJ, SignedOrder) {
    EXPECT_DOUBLE_EQ(bessel_j_signed(-3, 2.5), -bessel_j(3, 2.5));
    EXPECT_DOUBLE_EQ(bessel_j_signed(-4, 2.5), bessel_j(4, 2.5));
}

TEST(BesselJ, ThreeTermRecurrence) {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> order(1, 50);
    std::uniform_real_distribution<double> arg(0.1, 50.0);
    for (int i = 0; i < 500; ++i) {
        const int n = order(gen);
        const double x = arg(gen);
        const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        const double rhs = 2.0 * n / x * bessel_j(n, x);
        EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(std::abs(rhs), 1e-3)) << n << " " << x;
    }
}

TEST(BesselJ, SquareSumNormalization) {
    for (double x : {1.0, 8.0, 11.3}) {
        double prev = 0.0;
        for (int big_n : {2, 5, 10, 20, 40}) {
            double s = bessel_j(0, x) * bessel_j(0, x);
            for (int n = 1; n <= big_n; ++n) s += 2.0 * bessel_j(n, x) * bessel_j(n, x);
            EXPECT_LE(s, 1.0 + 1e-14);
            EXPECT_GE(s, prev - 1e-15);
            prev = s;
        }
        EXPECT_NEAR(prev, 1.0, 1e-14);
    }
}

TEST(BesselJ, RejectsOutOfRange) {
    EXPECT_THROW(bessel_j(0, -1.0), DomainError);
    EXPECT_THROW(bessel_j(-1, 1.0), DomainError);
    EXPECT_THROW(bessel_j(201, 1.0), DomainError);
    EXPECT_THROW(bessel_j(0, 2e4), DomainError);
}

TEST(Hankel, RealPartIsJ0) {
    EXPECT_NEAR(hankel1(0, 1.0).real(), oracle::series_j(0, 1.0), 1e-14);
}

TEST(Hankel, AgreesWithStandardLibrary) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> logx(-8.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::pow(10.0, logx(gen));
        for (int n : {0, 1}) {
            const auto h = hankel1(n, x);
            const auto ref = oracle::std_hankel1(n, x);
            // Y_1 ~ -2/(pi x) near zero, so compare relatively there.
            const double scale = std::max(1.0, std::abs(ref.imag()));
            EXPECT_NEAR(h.real(), ref.real(), 1e-10) << n << " " << x;
            EXPECT_NEAR(h.imag(), ref.imag(), 1e-10 * scale) << n << " " << x;
        }
    }
}

TEST(Hankel, AsymptoticEnvelope) {
    const double x = 100.0;
    const double envelope = std::sqrt(2.0 / (oracle::pi * x));
    EXPECT_NEAR(std::abs(hankel1(0, x)) / envelope, 1.0, 0.01);
}

TEST(Hankel, LogSingularity) {
    const double a = hankel1(0, 1e-6).imag();
    const double b = hankel1(0, 1e-4).imag();
    const double c = hankel1(0, 1e-2).imag();
    EXPECT_LT(a, b);
    EXPECT_LT(b, c);
    EXPECT_LT(a, -8.0);
}

TEST(Hankel, RejectsNonPositive) {
    EXPECT_THROW(hankel1(0, 0.0), DomainError);
    EXPECT_THROW(hankel1(1, -1.0), DomainError);
    EXPECT_THROW(hankel1(2, 1.0), DomainError);
}

TEST(ArcQuadrature, MeasureOfConfigOne) {
    const auto ap = ApertureSet::config_one();
    std::vector<Complex> ones(100, Complex{1.0, 0.0});
    EXPECT_NEAR(arc_quadrature(ones, ap).real(), 4.0 * kPi / 5.0, 1e-13);
}

TEST(ArcQuadrature, ZeroValues) {
    const auto ap = ApertureSet::config_two();
    std::vector<Complex> zeros(90);
    EXPECT_EQ(arc_quadrature(zeros, ap), Complex(0.0, 0.0));
}

TEST(ArcQuadrature, FullCircleExponential) {
    const auto ap = ApertureSet::full_circle(512);
    const auto angles = ap.receiver_angles();
    std::vector<Complex> v;
    for (double t : angles) v.push_back(std::polar(1.0, t));
    EXPECT_LT(std::abs(arc_quadrature(v, ap)), 1e-12);
}

TEST(ArcQuadrature, Orthogonality) {
    for (int m = -6; m <= 6; ++m) {
        for (int n = -6; n <= 6; ++n) {
            const auto ap = ApertureSet::full_circle(4 * (std::abs(m) + std::abs(n) + 1));
            std::vector<Complex> v;
            for (double t : ap.receiver_angles()) v.push_back(std::polar(1.0, (m - n) * t));
            const Complex got = arc_quadrature(v, ap);
            EXPECT_NEAR(std::abs(got - Complex(m == n ? 2.0 * kPi : 0.0, 0.0)), 0.0, 1e-10);
        }
    }
}

TEST(ArcQuadrature, ConjugateSymmetricPairing) {
    const auto ap = ApertureSet::config_two();
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    std::vector<Complex> f(90), g(90), fg(90), gf(90);
    for (int q = 0; q < 90; ++q) {
        f[q] = {nd(gen), nd(gen)};
        g[q] = {nd(gen), nd(gen)};
        fg[q] = f[q] * std::conj(g[q]);
        gf[q] = g[q] * std::conj(f[q]);
    }
    const Complex a = arc_quadrature(fg, ap);
    const Complex b = std::conj(arc_quadrature(gf, ap));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-13);
}

TEST(ArcQuadrature, LengthMismatch) {
    std::vector<Complex> v(7);
    EXPECT_THROW(arc_quadrature(v, ApertureSet::config_one()), ValidationError);
}

TEST(ArcNorm, ConstantModulus) {
    const auto ap = ApertureSet::config_one();
    std::vector<Complex> v(100, Complex{0.0, 2.0});
    EXPECT_NEAR(arc_norm(v, ap), 2.0 * std::sqrt(ap.measure()), 1e-13);
}
