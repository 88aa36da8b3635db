#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qzlab/protocols.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace qzlab;
using std::numbers::pi;

TEST_CASE("drag_success_closed_form") {
    CHECK_THROWS_AS(drag_success_closed_form(0.1, 0), ValidationError);
    CHECK(drag_success_closed_form(0.0, 1) == 1.0);
    CHECK(drag_success_closed_form(0.1, 10) == doctest::Approx(0.90483742).epsilon(1e-8));
    CHECK(std::abs(drag_success_closed_form(0.1, 10) - std::exp(-0.1)) <= 1e-15);
    CHECK(std::abs(drag_success_closed_form(cplx{0.06, 0.08}, 10) - std::exp(-0.1)) <= 1e-15);

    // |e^{-N d^2} - (1 - d^2)^N| <= N d^4 across d <= 0.3, N <= 100.
    for (int i = 1; i <= 30; ++i) {
        const double d = 0.01 * i;
        for (std::size_t n = 1; n <= 100; ++n) {
            const double gap = std::abs(drag_success_closed_form(d, n) - std::pow(1.0 - d * d, static_cast<double>(n)));
            REQUIRE(gap <= static_cast<double>(n) * std::pow(d, 4));
        }
    }
}

TEST_CASE("amplitude_drag") {
    SUBCASE("one step reproduces the single overlap") {
        DragConfig cfg;
        cfg.steps = 1;
        const ProtocolReport r = amplitude_drag(cfg);
        REQUIRE(r.steps.size() == 1);
        CHECK(std::abs(r.cumulative - std::exp(-0.01)) <= 1e-8);
        CHECK(std::abs(r.cumulative - 0.99) <= 5.1e-5);
    }
    SUBCASE("ten steps of 0.1 from alpha = 10") {
        DragConfig cfg; // alpha0 = 10, delta = 0.1, N = 10, forced yes
        const ProtocolReport r = amplitude_drag(cfg);
        CHECK(r.dim == 229);
        REQUIRE(r.steps.size() == 10);
        CHECK(r.completed);
        CHECK(std::abs(r.cumulative - 0.90483742) <= 1e-8);
        CHECK(std::abs(r.closed_form - std::exp(-0.1)) <= 1e-15);
        CHECK(std::abs(*r.first_order_approximation - std::pow(0.99, 10)) <= 1e-15);
        CHECK(*r.first_order_approximation == doctest::Approx(0.90438208).epsilon(1e-8));
        CHECK(std::abs(r.cumulative - *r.first_order_approximation) <= 10 * 1e-4);
        CHECK(std::abs(*r.single_shot - 0.36787944) <= 1e-8);
        CHECK(r.final_fidelity >= 1.0 - 1e-10);
        CHECK(r.truncation_fidelity >= 1.0 - 1e-12);
        for (std::size_t k = 0; k < r.steps.size(); ++k) {
            CHECK(r.steps[k].step == k + 1);
            CHECK(std::abs(r.steps[k].target - (10.0 + 0.1 * static_cast<double>(k + 1))) <= 1e-12);
            CHECK(std::abs(r.steps[k].probability_yes - std::exp(-0.01)) <= 1e-8);
        }
        CHECK(r.warnings.empty());
    }
    SUBCASE("zero delta never moves") {
        DragConfig cfg;
        cfg.delta = 0.0;
        cfg.steps = 7;
        const ProtocolReport r = amplitude_drag(cfg);
        CHECK(r.cumulative == 1.0);
        CHECK(r.final_state == coherent_state(cfg.alpha0, r.dim).state);
    }
    SUBCASE("a large delta is flagged") {
        DragConfig cfg;
        cfg.alpha0 = 0.5;
        cfg.delta = 0.8;
        cfg.steps = 2;
        CHECK_FALSE(amplitude_drag(cfg).warnings.empty());
    }
    SUBCASE("explicit truncation too small") {
        DragConfig cfg;
        cfg.dim = 40;
        CHECK_THROWS_AS(amplitude_drag(cfg), TruncationError);
    }
    SUBCASE("invalid step count") {
        DragConfig cfg;
        cfg.steps = 0;
        CHECK_THROWS_AS(amplitude_drag(cfg), ValidationError);
    }
    SUBCASE("sampled NO under both policies") {
        DragConfig cfg;
        cfg.alpha0 = 2.0;
        cfg.delta = 1.5; // p = e^-2.25 per step
        cfg.steps = 5;
        bool saw_no = false;
        for (std::uint64_t id = 0; id < 50 && !saw_no; ++id) {
            UniformStream a = rng_stream(1, id), b = rng_stream(1, id);
            cfg.policy = DecisionPolicy::sample(a);
            cfg.on_no = OnNo::RecordAndStop;
            const ProtocolReport stop = amplitude_drag(cfg);
            cfg.policy = DecisionPolicy::sample(b);
            cfg.on_no = OnNo::Abort;
            const ProtocolReport abort = amplitude_drag(cfg);
            if (stop.completed) {
                continue;
            }
            saw_no = true;
            CHECK(stop.steps.back().outcome == Outcome::No);
            CHECK_FALSE(stop.aborted);
            CHECK(abort.aborted);
            CHECK(abort.steps.size() + 1 == stop.steps.size());
            for (const StepRecord& s : abort.steps) {
                CHECK(s.outcome == Outcome::Yes);
            }
        }
        CHECK(saw_no);
    }
}

TEST_CASE("laskey_success_closed_form") {
    CHECK(std::abs(laskey_success_closed_form(1.0, {0.0, pi / 2.0}) - std::exp(-1.0)) <= 1e-15);
    CHECK(std::abs(laskey_success_closed_form(cplx{0.0, 2.0}, {0.0, pi / 2.0}) - std::exp(-4.0)) <= 1e-15);
    CHECK(laskey_success_closed_form(0.0, {0.0, 0.3, 0.9}) == 1.0);
    CHECK_THROWS_AS(laskey_success_closed_form(1.0, {0.0, 0.5, 0.5}), ValidationError);

    // Doubling the number of equal steps over [0, pi/2] never lowers the value.
    LaskeyConfig cfg;
    for (std::size_t m = 1; m < 4096; m *= 2) {
        cfg.substeps = m;
        auto coarse = laskey_phases(cfg);
        cfg.substeps = 2 * m;
        auto fine = laskey_phases(cfg);
        coarse.insert(coarse.begin(), 0.0);
        fine.insert(fine.begin(), 0.0);
        CHECK(laskey_success_closed_form(1.0, fine) >= laskey_success_closed_form(1.0, coarse));
    }
}

TEST_CASE("laskey_protocol") {
    LaskeyConfig cfg;
    cfg.alpha0 = 10.0;
    cfg.gamma = 1.0;

    SUBCASE("gamma = 0 never moves") {
        cfg.gamma = 0.0;
        cfg.substeps = 50;
        const ProtocolReport r = laskey_protocol(cfg);
        CHECK(r.cumulative == 1.0);
        CHECK(r.final_state == coherent_state(cfg.alpha0, r.dim).state);
    }
    SUBCASE("one step is a single jump of gamma") {
        cfg.substeps = 1;
        const ProtocolReport r = laskey_protocol(cfg);
        REQUIRE(r.steps.size() == 1);
        CHECK(r.steps[0].target == cplx{11.0, 0.0});
        CHECK(std::abs(r.cumulative - std::exp(-1.0)) <= 1e-8);
        CHECK(r.final_state == coherent_state(11.0, r.dim).state);
    }
    SUBCASE("fine observation approaches certainty") {
        cfg.substeps = 1000;
        const ProtocolReport r = laskey_protocol(cfg);
        std::vector<cplx> amplitudes{cfg.alpha0};
        for (std::size_t k = 1; k <= 1000; ++k) {
            amplitudes.push_back(cfg.alpha0 + std::sin(pi / 2.0 * static_cast<double>(k) / 1000.0));
        }
        const double oracle_p = oracle::overlap_product(amplitudes);
        CHECK(std::abs(r.cumulative - oracle_p) <= 1e-10);
        CHECK(std::abs(r.closed_form - oracle_p) <= 1e-12);
        CHECK(r.cumulative == doctest::Approx(0.99877).epsilon(1e-5));
        CHECK(r.final_fidelity >= 1.0 - 1e-10);
        CHECK(std::abs(r.steps.back().target - 11.0) == 0.0);
    }
    SUBCASE("no observation, no change") {
        cfg.observe = false;
        const ProtocolReport r = laskey_protocol(cfg);
        CHECK(r.steps.empty());
        CHECK(r.final_fidelity == 1.0);
        CHECK(r.cumulative == 1.0);
        CHECK(r.final_state == coherent_state(cfg.alpha0, r.dim).state);
    }
    SUBCASE("window opening after the zero crossing starts from alpha0") {
        cfg.theta_start = pi / 4.0;
        cfg.substeps = 3;
        const ProtocolReport r = laskey_protocol(cfg);
        std::vector<cplx> amplitudes{cfg.alpha0};
        for (double theta : laskey_phases(cfg)) {
            amplitudes.push_back(cfg.alpha0 + std::sin(theta));
        }
        CHECK(std::abs(r.closed_form - oracle::overlap_product(amplitudes)) <= 1e-12);
        CHECK(std::abs(r.cumulative - r.closed_form) <= 1e-8);
    }
    SUBCASE("shifted cycle 2 pi n") {
        cfg.theta_start = 4.0 * pi;
        cfg.theta_end = 4.5 * pi;
        cfg.substeps = 10;
        const ProtocolReport r = laskey_protocol(cfg);
        CHECK(std::abs(r.cumulative - r.closed_form) <= 1e-8);
        CHECK(r.final_fidelity >= 1.0 - 1e-10);
    }
    SUBCASE("invalid windows") {
        cfg.theta_end = cfg.theta_start;
        CHECK_THROWS_AS(laskey_protocol(cfg), ValidationError);
    }
}

TEST_CASE("zeno_survival") {
    ZenoConfig cfg;
    cfg.rabi_frequency = 1.0;
    cfg.total_time = pi;

    cfg.measurements = 1;
    CHECK(zeno_survival(cfg).cumulative <= 1e-10);

    cfg.measurements = 2;
    CHECK(std::abs(zeno_survival(cfg).cumulative - 0.25) <= 1e-10);

    cfg.measurements = 100;
    const ProtocolReport r = zeno_survival(cfg);
    CHECK(std::abs(r.cumulative - 0.975627) <= 1e-6);
    CHECK(std::abs(r.cumulative - oracle::zeno_closed(pi, 100)) <= 1e-10);
    CHECK(std::abs(r.cumulative - oracle::zeno_matrix_product(pi, 100)) <= 1e-10);
    CHECK(*r.survival_at_double_n > r.cumulative);
    CHECK(r.final_fidelity == 1.0);

    for (std::size_t n : {3, 5, 10, 37}) {
        cfg.measurements = n;
        CHECK(std::abs(zeno_survival(cfg).cumulative - oracle::zeno_closed(pi, n)) <= 1e-10);
    }

    // A measurement that lands on a full flip is survivable only if N > 1.
    cfg.total_time = 2.0 * pi;
    cfg.measurements = 1;
    CHECK(zeno_survival(cfg).cumulative == doctest::Approx(1.0));
    CHECK(*zeno_survival(cfg).survival_at_double_n <= 1e-10);

    cfg.measurements = 0;
    CHECK_THROWS_AS(zeno_survival(cfg), ValidationError);
}

TEST_CASE("von_neumann_chain") {
    SUBCASE("definite outcome stays a product state") {
        const ChainReport r = von_neumann_chain({1.0, 0.0, 2});
        CHECK(r.composite_error == 0.0);
        CHECK(r.reduced_system(0, 0) == cplx{1.0, 0.0});
        CHECK(r.reduced_system(1, 1) == cplx{0.0, 0.0});
        CHECK(r.max_off_diagonal == 0.0);
    }
    SUBCASE("equal superposition decoheres in the pointer basis") {
        const double h = std::numbers::sqrt2 / 2.0;
        const ChainReport r = von_neumann_chain({h, h, 2});
        CHECK(r.composite_error <= 1e-15);
        CHECK(r.max_off_diagonal <= 1e-14);
        CHECK(std::abs(r.system_populations[0] - 0.5) <= 1e-15);
        CHECK(std::abs(r.system_populations[1] - 0.5) <= 1e-15);

        std::vector<cplx> amps(r.composite.amps().begin(), r.composite.amps().end());
        const oracle::Dense brute = oracle::partial_trace(oracle::outer(amps), {2, 2}, 0);
        CHECK(std::abs(brute(0, 1)) <= 1e-15);
        CHECK(std::abs(brute(0, 0) - r.reduced_system(0, 0)) <= 1e-15);
    }
    SUBCASE("apparatus readings follow the Born rule") {
        const ChainReport r = von_neumann_chain({std::sqrt(0.3), std::sqrt(0.7), 2});
        CHECK(std::abs(r.apparatus_probabilities[0] - 0.3) <= 1e-12);
        CHECK(std::abs(r.apparatus_probabilities[1] - 0.7) <= 1e-12);
        CHECK(r.born_error <= 1e-12);
    }
    SUBCASE("complex coefficients and a spare apparatus level") {
        const ChainReport r = von_neumann_chain({cplx{0.0, 0.6}, cplx{-0.8, 0.0}, 3});
        CHECK(r.apparatus_probabilities.size() == 3);
        CHECK(r.apparatus_probabilities[2] == 0.0);
        CHECK(std::abs(r.system_populations[0] - 0.36) <= 1e-15);
        CHECK(r.max_off_diagonal <= 1e-14);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(von_neumann_chain({1.0, 1.0, 2}), ValidationError);
        CHECK_THROWS_AS(von_neumann_chain({1.0, 0.0, 1}), ApparatusTooSmall);
    }
}

TEST_CASE("overlap_table") {
    const std::vector<cplx> deltas{0.0, 0.1, cplx{0.0, 0.1}, -0.5, cplx{0.3, 0.4}};
    const auto rows = overlap_table(10.0, deltas);
    REQUIRE(rows.size() == deltas.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        CHECK(rows[i].beta == 10.0 + deltas[i]);
        CHECK(std::abs(rows[i].numeric - std::exp(-std::norm(deltas[i]))) <= 1e-8);
        CHECK(std::abs(rows[i].closed_form - std::exp(-std::norm(deltas[i]))) <= 1e-13);
        CHECK(rows[i].first_order == doctest::Approx(1.0 - std::norm(deltas[i])));
    }
    CHECK(rows[0].numeric == 1.0);
}
