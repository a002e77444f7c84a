#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "uwqkd/errors.hpp"
#include "uwqkd/qber.hpp"

using namespace uwqkd;

using channel::PropagationMode;
using qber::Formula;
using qber::qber_legacy;
using qber::qber_modified;
using qber::rates;
using qber::decompose;
using qber::link_radiance;
using testing::link_for;

namespace {

// First range on a 0.5 m grid where the total QBER reaches the threshold.
double crossing(const Link& link, Formula f, double threshold = 0.11) {
    for (double r = 0.0; r < 2000.0; r += 0.5)
        if (qber::qber(link, r, f).total() >= threshold) return r;
    return -1.0;
}

}  // namespace

TEST_CASE("rate breakdown") {
    const auto link = link_for("ordinary", PropagationMode::Downward);
    const auto far = rates(link, 5000.0);
    CHECK(far.signal < 1e-30);
    CHECK(far.dark_group == 200.0);

    const auto r100 = rates(link, 100.0);
    CHECK(r100.signal == doctest::Approx(0.1 * 0.19 / 5e-8 * std::exp(-3.0)).epsilon(1e-12));
    CHECK(r100.signal == doctest::Approx(1.89e4).epsilon(2e-3));
    CHECK(r100.total() == r100.signal + r100.dark_group + r100.background_group + r100.scatter);

    auto eta = link;
    eta.system.detector_efficiency = 0.8;
    CHECK(rates(eta, 100.0).signal == doctest::Approx(4 * r100.signal).epsilon(1e-14));
}

TEST_CASE("limit cases of the modified QBER") {
    auto link = link_for("ordinary", PropagationMode::Downward);
    link.radiance_override = 0.0;
    link.system.dark_count_rate = 0.0;
    CHECK(qber_modified(link, 50.0).total() == doctest::Approx(link.system.contrast).epsilon(1e-14));

    link.system.dark_count_rate = 100.0;
    CHECK(qber_modified(link, 5000.0).total() == doctest::Approx(0.5).epsilon(1e-12));

    link.system.dark_count_rate = 0.0;
    CHECK_THROWS_WITH_AS(qber_modified(link, 1e5), "no counts: every detection term vanishes", DomainError);
}

TEST_CASE("decomposition is exhaustive and bounded") {
    for (const char* p : {"ordinary", "optimal"})
        for (auto m : {PropagationMode::Upward, PropagationMode::Downward, PropagationMode::Horizontal})
            for (double r = 0.0; r <= 600.0; r += 25.0) {
                auto link = link_for(p, m);
                link.system.scatter_rate = 50.0;
                link.system.scatter_error_prob = 0.3;
                const auto q = qber_modified(link, r);
                CHECK(q.total() == q.optical + q.dark + q.background + q.scatter);
                for (double c : {q.optical, q.dark, q.background, q.scatter}) {
                    CHECK(c >= 0.0);
                    CHECK(c <= 1.0);
                }
                CHECK(q.total() <= 0.5 + 1e-9);
            }
}

TEST_CASE("total QBER is non-decreasing in L, I_dc and P") {
    const auto base = link_for("ordinary", PropagationMode::Downward);
    for (double r : {0.0, 50.0, 150.0, 300.0}) {
        double prev = -1;
        for (double L = 0.0; L <= 1e-6; L += 1e-7) {
            auto l = base;
            l.radiance_override = L;
            const double q = qber_modified(l, r).total();
            CHECK(q >= prev - 1e-15);
            prev = q;
        }
        prev = -1;
        for (double idc = 0.0; idc <= 1000.0; idc += 50.0) {
            auto l = base;
            l.system.dark_count_rate = idc;
            const double q = qber_modified(l, r).total();
            CHECK(q >= prev - 1e-15);
            prev = q;
        }
        prev = -1;
        for (double p = 0.0; p <= 0.5; p += 0.025) {
            auto l = base;
            l.system.contrast = p;
            const double q = qber_modified(l, r).total();
            CHECK(q >= prev - 1e-15);
            prev = q;
        }
    }
}

TEST_CASE("optical error fraction falls with range") {
    const auto link = link_for("ordinary", PropagationMode::Upward);
    double prev = 1.0;
    for (double r = 0.0; r <= 800.0; r += 10.0) {
        const double q = qber_modified(link, r).optical;
        CHECK(q <= prev);
        prev = q;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("background error has an interior maximum in downward mode") {
    const auto link = link_for("ordinary", PropagationMode::Downward);
    double best = -1, arg = -1;
    const double last = 1000.0;
    for (double r = 0.0; r <= last; r += 2.0) {
        const double q = qber_modified(link, r).background;
        if (q > best) {
            best = q;
            arg = r;
        }
    }
    CHECK(arg > 0.0);
    CHECK(arg < last);
    CHECK(qber_modified(link, 0.0).background < best);
    CHECK(qber_modified(link, last).background < best);
}

TEST_CASE("modified QBER is invariant under common rate scaling") {
    auto link = link_for("ordinary", PropagationMode::Horizontal);
    const auto r = rates(link, 120.0);
    const double q = decompose(r, link.system).total();
    for (double k : {1e-3, 0.5, 10.0, 1e4}) {
        auto s = r;
        s.signal *= k;
        s.dark_group *= k;
        s.background_group *= k;
        s.background_error *= k;
        CHECK(decompose(s, link.system).total() == doctest::Approx(q).epsilon(1e-13));
    }
}

TEST_CASE("legacy form") {
    auto link = link_for("ordinary", PropagationMode::Downward);
    // Without background the forms differ only by optics transmittance on the signal.
    auto dark = link;
    dark.radiance_override = 0.0;
    auto no_opt = dark;
    no_opt.system.optics_transmittance = 1.0;
    for (double r : {0.0, 40.0, 200.0})
        CHECK(qber_legacy(dark, r).total() == doctest::Approx(qber_modified(no_opt, r).total()).epsilon(1e-14));

    for (auto m : {PropagationMode::Upward, PropagationMode::Downward, PropagationMode::Horizontal}) {
        const auto l = link_for("ordinary", m);
        for (double r = 0.0; r <= 400.0; r += 20.0) CHECK(qber_legacy(l, r).total() >= qber_modified(l, r).total());
    }
}

TEST_CASE("threshold crossings with the bundled table") {
    const double down = crossing(link_for("ordinary", PropagationMode::Downward), Formula::Modified);
    CHECK(down == doctest::Approx(130.0).epsilon(0.2));
    const double legacy = crossing(link_for("ordinary", PropagationMode::Downward), Formula::Legacy);
    CHECK(legacy == doctest::Approx(35.0).epsilon(0.3));
    CHECK(legacy < down);
}

TEST_CASE("radiance lookup follows the receiver depth") {
    const auto link = link_for("ordinary", PropagationMode::Downward);
    const auto near_surface = link_radiance(link, 0.0);
    const auto deep = link_radiance(link, 300.0);
    CHECK(near_surface.value > deep.value);
    CHECK_FALSE(deep.clamped);
    CHECK(link_radiance(link, 5000.0).clamped);
    const auto up = link_for("ordinary", PropagationMode::Upward);
    CHECK(link_radiance(up, 0.0).value == link_radiance(up, 400.0).value);
}
