#include <doctest.h>

#include <mcgip/errors.h>
#include <mcgip/moments.h>
#include <mcgip/rng.h>

#include <cmath>

using namespace mcgip;

namespace {

GazeHeatmap make_map(int rows, int cols) {
    GazeHeatmap hm;
    hm.image_id = "m";
    hm.rows = rows;
    hm.cols = cols;
    hm.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    return hm;
}

GazeHeatmap random_padded_map(Rng& rng, int rows, int cols, int pad) {
    GazeHeatmap hm = make_map(rows, cols);
    for (int r = pad; r < rows - pad; ++r)
        for (int c = pad; c < cols - pad; ++c) hm.at(r, c) = rng.uniform01();
    return hm;
}

GazeHeatmap rotate90(const GazeHeatmap& h) {
    GazeHeatmap out = make_map(h.cols, h.rows);
    out.image_id = h.image_id;
    for (int r = 0; r < h.rows; ++r)
        for (int c = 0; c < h.cols; ++c) out.at(c, h.rows - 1 - r) = h.at(r, c);
    return out;
}

} // namespace

TEST_CASE("central moments by hand summation") {
    SUBCASE("point mass has zero central moments") {
        GazeHeatmap hm = make_map(5, 5);
        hm.at(2, 3) = 400.0;
        CHECK(central_moment(hm, 0, 0) == 400.0);
        CHECK(central_moment(hm, 2, 0) == 0.0);
        CHECK(central_moment(hm, 0, 2) == 0.0);
    }
    SUBCASE("two unit masses two cells apart") {
        GazeHeatmap hm = make_map(1, 3);
        hm.at(0, 0) = 1.0;
        hm.at(0, 2) = 1.0;
        CHECK(central_moment(hm, 0, 0) == 2.0);
        CHECK(central_moment(hm, 2, 0) == 2.0);
        CHECK(central_moment(hm, 0, 2) == 0.0);
    }
    SUBCASE("uniform 3x3 of ones") {
        GazeHeatmap hm = make_map(3, 3);
        for (double& v : hm.values) v = 1.0;
        CHECK(central_moment(hm, 0, 0) == 9.0);
        CHECK(central_moment(hm, 2, 0) == 6.0);
        CHECK(central_moment(hm, 0, 2) == 6.0);
    }
    SUBCASE("first central moments vanish") {
        Rng rng(5);
        const GazeHeatmap hm = random_padded_map(rng, 8, 9, 1);
        CHECK(central_moment(hm, 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(central_moment(hm, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("unsupported orders and zero mass") {
        GazeHeatmap hm = make_map(3, 3);
        CHECK(central_moment(hm, 0, 0) == 0.0);
        CHECK_THROWS_AS(central_moment(hm, 2, 0), ZeroMassHeatmap);
        hm.at(0, 0) = 1.0;
        CHECK_THROWS_AS(central_moment(hm, 2, 1), Error);
    }
}

TEST_CASE("moment_vector combines mass and dispersion") {
    SUBCASE("single cell has zero inertia") {
        GazeHeatmap hm = make_map(4, 4);
        hm.at(1, 1) = 400.0;
        const MomentVector m = moment_vector(hm);
        CHECK(m.mu00 == 400.0);
        CHECK(m.phi1 == 0.0);
    }
    SUBCASE("uniform 3x3 of ones") {
        GazeHeatmap hm = make_map(3, 3);
        for (double& v : hm.values) v = 1.0;
        const MomentVector m = moment_vector(hm);
        CHECK(m.mu00 == 9.0);
        CHECK(m.phi1 == doctest::Approx(12.0 / 81.0).epsilon(1e-12));
    }
    SUBCASE("zero-mass heatmap is rejected") {
        GazeHeatmap hm = make_map(3, 3);
        CHECK_THROWS_AS(moment_vector(hm), ZeroMassHeatmap);
    }
}

TEST_CASE("moment vector is invariant under integer translation") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const GazeHeatmap hm = random_padded_map(rng, 12, 14, 4);
        GazeHeatmap shifted = make_map(12, 14);
        const int dr = static_cast<int>(rng.below(7)) - 3;
        const int dc = static_cast<int>(rng.below(7)) - 3;
        for (int r = 4; r < 8; ++r)
            for (int c = 4; c < 10; ++c) shifted.at(r + dr, c + dc) = hm.at(r, c);

        const MomentVector a = moment_vector(hm);
        const MomentVector b = moment_vector(shifted);
        CHECK(b.mu00 == doctest::Approx(a.mu00).epsilon(1e-12));
        CHECK(b.phi1 == doctest::Approx(a.phi1).epsilon(1e-12));
    }
}

TEST_CASE("phi1 is invariant under 90 degree rotation") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const GazeHeatmap hm = random_padded_map(rng, 10, 13, 2);
        const MomentVector a = moment_vector(hm);
        const MomentVector b = moment_vector(rotate90(hm));
        CHECK(b.mu00 == doctest::Approx(a.mu00).epsilon(1e-12));
        CHECK(b.phi1 == doctest::Approx(a.phi1).epsilon(1e-12));
    }
}

TEST_CASE("intensity scaling maps [mu00, phi1] to [c mu00, phi1 / c]") {
    Rng rng(21);
    for (double c : {2.0, 0.25, 13.7}) {
        const GazeHeatmap hm = random_padded_map(rng, 9, 9, 1);
        GazeHeatmap scaled = hm;
        for (double& v : scaled.values) v *= c;
        const MomentVector a = moment_vector(hm);
        const MomentVector b = moment_vector(scaled);
        CHECK(b.mu00 == doctest::Approx(c * a.mu00).epsilon(1e-12));
        CHECK(b.phi1 == doctest::Approx(a.phi1 / c).epsilon(1e-12));
    }
}

TEST_CASE("moment_affinity follows the normalized L1 blend") {
    SUBCASE("identical vectors reach one") {
        const MomentVector m{123.0, 0.45};
        CHECK(moment_affinity(m, m, 0.5) == 1.0);
        CHECK(moment_affinity(m, m, 0.0) == 1.0);
        CHECK(moment_affinity(m, m, 1.0) == 1.0);
    }
    SUBCASE("hand-evaluated example") {
        const MomentVector m1{100.0, 0.2};
        const MomentVector m2{150.0, 0.3};
        CHECK(moment_affinity(m1, m2, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("symmetry and range") {
        Rng rng(27);
        for (int trial = 0; trial < 50; ++trial) {
            const MomentVector m1{rng.uniform(0, 1000), rng.uniform01()};
            const MomentVector m2{rng.uniform(0, 1000), rng.uniform01()};
            const double alpha = rng.uniform01();
            const double v = moment_affinity(m1, m2, alpha);
            CHECK(v == moment_affinity(m2, m1, alpha));
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    SUBCASE("zero components count as zero distance") {
        const MomentVector z1{0.0, 0.0};
        const MomentVector z2{0.0, 0.0};
        CHECK(moment_affinity(z1, z2, 0.5) == 1.0);
        const MomentVector m{10.0, 0.0};
        CHECK(moment_affinity(z1, m, 1.0) == 0.0); // delta(0,10) = 1
    }
    SUBCASE("nonincreasing in the mass gap at fixed dispersion") {
        double prev = 1.0;
        for (double gap : {0.0, 10.0, 40.0, 90.0, 400.0}) {
            const double v = moment_affinity({100.0, 0.3}, {100.0 + gap, 0.3}, 0.5);
            CHECK(v <= prev);
            prev = v;
        }
    }
    SUBCASE("alpha outside [0,1] is rejected") {
        CHECK_THROWS_AS(moment_affinity({1, 1}, {1, 1}, 1.5), Error);
    }
}
