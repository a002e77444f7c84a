#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uwqkd/errors.hpp"
#include "uwqkd/optics.hpp"

using namespace uwqkd;
using namespace uwqkd::optics;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg = pi / 180.0;

void check_vec(const StokesVector& got, const StokesVector& want, double tol = 1e-12) {
    CHECK(got.s0 == doctest::Approx(want.s0).epsilon(tol));
    CHECK(std::abs(got.s1 - want.s1) <= tol);
    CHECK(std::abs(got.s2 - want.s2) <= tol);
    CHECK(std::abs(got.s3 - want.s3) <= tol);
}

bool near(const MuellerMatrix& a, const MuellerMatrix& b, double tol) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(a(i, j) - b(i, j)) > tol) return false;
    return true;
}

StokesVector random_physical(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    double x = n(rng), y = n(rng), z = n(rng);
    const double norm = std::sqrt(x * x + y * y + z * z);
    const double s0 = 0.01 + u(rng);
    const double p = u(rng) * s0;
    return {s0, p * x / norm, p * y / norm, p * z / norm};
}

}  // namespace

TEST_CASE("polarizer passes its own axis and blocks the orthogonal one") {
    const auto m = polarizer_matrix({0.0, 0.0});
    check_vec(m * StokesVector{1, 1, 0, 0}, {1, 1, 0, 0});
    check_vec(m * StokesVector{1, -1, 0, 0}, {0, 0, 0, 0});
}

TEST_CASE("polarizer with unit extinction is the identity") {
    for (double theta : {0.0, 0.3, 1.1, 2.7})
        CHECK(near(polarizer_matrix({1.0, theta}), MuellerMatrix::identity(), 1e-15));
}

TEST_CASE("polarizer matrix is symmetric") {
    for (double e : {0.0, 0.01, 0.3})
        for (double theta : {0.0, 0.2, pi / 4, 1.3}) {
            const auto m = polarizer_matrix({e, theta});
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(m(i, j) == doctest::Approx(m(j, i)).epsilon(1e-15));
        }
}

TEST_CASE("ideal polarizer at an arbitrary angle is a projector") {
    for (double theta : {0.1, 0.4, 1.0}) {
        const auto m = polarizer_matrix({0.0, theta});
        CHECK(near(m * m, m, 1e-14));
        const StokesVector along{1, std::cos(2 * theta), std::sin(2 * theta), 0};
        check_vec(m * along, along, 1e-14);
    }
}

TEST_CASE("polarizer rejects out-of-range extinction") {
    CHECK_THROWS_AS(polarizer_matrix({-0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(polarizer_matrix({1.5, 0.0}), DomainError);
    CHECK_THROWS_AS(polarizer_matrix({0.1, NAN}), DomainError);
}

TEST_CASE("wave plate examples") {
    for (double theta : {0.0, 0.7, 2.0}) CHECK(near(waveplate_matrix({0.0, theta}), MuellerMatrix::identity(), 1e-15));
    check_vec(waveplate_matrix({pi, pi / 4}) * StokesVector{1, 1, 0, 0}, {1, -1, 0, 0});
    check_vec(waveplate_matrix({pi, 0.0}) * StokesVector{1, 0, 1, 0}, {1, 0, -1, 0});
    CHECK(waveplate_matrix({1.2, 0.4})(0, 0) == 1.0);
    CHECK_THROWS_AS(waveplate_matrix({INFINITY, 0.0}), DomainError);
}

TEST_CASE("half-wave plate at 22.5 deg maps H to D") {
    check_vec(waveplate_matrix({pi, pi / 8}) * basis_state(BasisState::H), {1, 0, 1, 0}, 1e-15);
    check_vec(waveplate_matrix({pi, -pi / 8}) * basis_state(BasisState::H), {1, 0, -1, 0}, 1e-15);
}

TEST_CASE("beam splitter examples") {
    CHECK(near(bs_transmit_matrix({0.5, 0.5, 0.5, 0.5, 0.0, 0.0}), MuellerMatrix::identity().scaled(0.5), 1e-15));
    const auto r = bs_reflect_matrix({0.45, 0.55, 0.55, 0.45, 0.0, 9.0 * deg});
    const auto out = r * StokesVector{1, 0, 1, 0};
    CHECK(out.s0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.s1 == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(out.s2 == doctest::Approx(0.49137).epsilon(1e-5));
    CHECK(out.s3 == doctest::Approx(0.07782).epsilon(1e-4));
    check_vec(bs_reflect_matrix({0.5, 0.5, 0.5, 0.5, 0.0, 0.0}) * StokesVector{1, 0, 1, 0}, {0.5, 0, 0.5, 0});
}

TEST_CASE("balanced phase-free transmission is a scaled identity") {
    for (double t = 0.0; t <= 1.0; t += 0.05)
        CHECK(near(bs_transmit_matrix({t, t, 1.0 - t, 1.0 - t, 0.0, 0.0}), MuellerMatrix::identity().scaled(t),
                   1e-15));
}

TEST_CASE("beam splitter rejects bad fractions") {
    CHECK_THROWS_AS(bs_reflect_matrix({0.5, 0.5, 1.2, 0.5, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(bs_transmit_matrix({-0.1, 0.5, 0.5, 0.5, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(bs_transmit_matrix({0.7, 0.5, 0.5, 0.5, 0.0, 0.0}), DomainError);
}

TEST_CASE("physicality and passivity over random specs") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    int gained_power = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto in = random_physical(rng);
        const double theta = 2 * pi * u(rng);
        const double phi = 2 * pi * u(rng);
        const double tp = u(rng), ts = u(rng);
        const BeamSplitterSpec bs{tp, ts, (1 - tp) * u(rng), (1 - ts) * u(rng), phi, 2 * pi * u(rng)};
        const MuellerMatrix passive[] = {polarizer_matrix({u(rng), theta}), bs_transmit_matrix(bs),
                                         bs_reflect_matrix(bs)};
        for (const auto& m : passive) {
            const auto out = m * in;
            if (!out.is_physical(1e-12)) ++violations;
            if (out.s0 > in.s0 * (1 + 1e-12)) ++gained_power;
        }
        const auto w = waveplate_matrix({2 * pi * u(rng), theta}) * in;
        if (!w.is_physical(1e-12)) ++violations;
        CHECK(w.s0 == in.s0);
    }
    CHECK(violations == 0);
    CHECK(gained_power == 0);
}

TEST_CASE("apply runs elements in optical order") {
    OpticalTrain id{{MuellerMatrix::identity()}};
    check_vec(apply(id, {1, 0.2, -0.3, 0.1}), {1, 0.2, -0.3, 0.1});
    const auto h = waveplate_matrix({pi, pi / 4});
    check_vec(apply({{h, h}}, basis_state(BasisState::H)), basis_state(BasisState::H));
    // Polarizer then HWP differs from HWP then polarizer.
    const auto p = polarizer_matrix({0.0, 0.0});
    CHECK(apply({{p, h}}, basis_state(BasisState::H)).s1 == doctest::Approx(-1.0));
    CHECK(apply({{h, p}}, basis_state(BasisState::H)).s0 == doctest::Approx(0.0));
    CHECK_THROWS_AS(apply({}, basis_state(BasisState::H)), DomainError);
}

TEST_CASE("contrast of ideal trains is zero") {
    for (auto s : {BasisState::H, BasisState::V, BasisState::D, BasisState::M})
        CHECK(contrast({{MuellerMatrix::identity()}}, s) == 0.0);
    TrainErrors ideal;
    ideal.splitter = {0.5, 0.5, 0.5, 0.5, 0.0, 0.0};
    ideal.polarizer_epsilon = 0.0;
    CHECK(system_contrast(ideal) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("contrast is invariant under input scaling") {
    const auto r = bs_reflect_matrix({0.45, 0.55, 0.55, 0.45, 0.0, 9 * deg});
    const auto out = r * (r * basis_state(BasisState::D));
    const double p = contrast_of(out, BasisState::D);
    for (double k : {1e-6, 0.3, 7.0, 1e5}) CHECK(contrast_of(out.scaled(k), BasisState::D) == doctest::Approx(p));
    // Two reflections: retardance and diattenuation both leak power.
    CHECK(p == doctest::Approx(0.5 * (1 - (r * (r * basis_state(BasisState::D))).s2 / out.s0)));
}

TEST_CASE("contrast of a dark output is an error") {
    const auto block = polarizer_matrix({0.0, 0.0});
    CHECK_THROWS_WITH_AS(contrast({{block}}, BasisState::V), "fully extinguished: no power reaches the analyzer",
                         DomainError);
}

TEST_CASE("train source and analyzer override the nominal state") {
    OpticalTrain t{{waveplate_matrix({pi, pi / 8})}};
    t.source = BasisState::H;
    t.analyzer = BasisState::D;
    CHECK(contrast(t, BasisState::H) == doctest::Approx(0.0).epsilon(1e-15));
    t.analyzer.reset();
    CHECK(contrast(t, BasisState::H) == doctest::Approx(0.5));
}

TEST_CASE("default trains") {
    TrainErrors e;
    e.splitter = {0.45, 0.55, 0.55, 0.45, 0.0, 9 * deg};
    const auto hv = default_train(BasisState::H, e);
    CHECK(hv.path == TrainPath::HV);
    CHECK(hv.elements.size() == 3);
    const auto dm = default_train(BasisState::M, e);
    CHECK(dm.path == TrainPath::DM);
    CHECK(dm.elements.size() == 5);
    // H is an eigenstate of the splitter: only polarizer leakage remains.
    CHECK(contrast(hv, BasisState::H) < 1e-6);
    // Two 9 deg reflections with 55/45 diattenuation dominate the D/M path.
    const double dmc = contrast(dm, BasisState::M);
    CHECK(dmc > 0.03);
    CHECK(dmc < 0.045);
}

TEST_CASE("worst-case contrast over the tolerance boxes") {
    const auto ord = worst_case_contrast(ToleranceBox::ordinary());
    CHECK(ord.system >= 0.015);
    CHECK(ord.system <= 0.020);
    CHECK(ord.system == doctest::Approx(system_contrast(ord.argmax)));
    CHECK(ord.dm_path > ord.system);
    CHECK(ord.hv_path < ord.system);

    const auto opt = worst_case_contrast(ToleranceBox::optimal());
    CHECK(opt.system < ord.system / 10);
    // HWP retardance alone (two plates, same sign) sets a floor near 2.2e-4
    // on the D/M path.
    CHECK(opt.dm_path > 2.0e-4);
}
