#include <doctest.h>

#include <string>

#include "magic/errors.hpp"
#include "magic/params_io.hpp"

using magic::SimParams;

TEST_SUITE("params_io") {

TEST_CASE("shipped default file reproduces the built-in defaults") {
    const auto p = magic::load_params_file(std::string(MAGIC_DATA_DIR) +
                                           "/vteam_default.params");
    const SimParams d;
    CHECK(p.device.v_t_set == d.device.v_t_set);
    CHECK(p.device.v_t_reset == d.device.v_t_reset);
    CHECK(p.device.k_set == doctest::Approx(d.device.k_set).epsilon(1e-9));
    CHECK(p.device.k_reset == doctest::Approx(d.device.k_reset).epsilon(1e-9));
    CHECK(p.device.alpha_set == d.device.alpha_set);
    CHECK(p.device.alpha_reset == d.device.alpha_reset);
    CHECK(p.device.r_on == d.device.r_on);
    CHECK(p.device.r_off == d.device.r_off);
    CHECK(p.levels.v_input_write == d.levels.v_input_write);
    CHECK(p.levels.v_init == d.levels.v_init);
    CHECK(p.levels.v_exec == d.levels.v_exec);
    CHECK(p.levels.v_read == d.levels.v_read);
    CHECK(p.levels.v_gate_on == d.levels.v_gate_on);
    CHECK(p.levels.v_gate_off == d.levels.v_gate_off);
    CHECK(p.levels.v_reset_write == d.levels.v_reset_write);
    CHECK(p.timing.pulse_width == d.timing.pulse_width);
    CHECK(p.timing.edge_time == d.timing.edge_time);
    CHECK(p.timing.settle_gap == d.timing.settle_gap);
    CHECK(p.circuit.r_selector_on == d.circuit.r_selector_on);
    CHECK(p.circuit.r_selector_off == d.circuit.r_selector_off);
    CHECK(p.circuit.r_row_switch == d.circuit.r_row_switch);
    CHECK(p.circuit.dt == d.circuit.dt);
    CHECK(p.circuit.kcl_abs_tol == d.circuit.kcl_abs_tol);
    CHECK(p.circuit.kcl_rel_tol == d.circuit.kcl_rel_tol);
    CHECK(p.circuit.max_newton_iters == d.circuit.max_newton_iters);
}

TEST_CASE("overrides, comments and blank lines") {
    const auto p = magic::parse_params(
        "# comment line\n"
        "\n"
        "r_on = 5e3   # trailing comment\n"
        "v_read = 0.15\n");
    CHECK(p.device.r_on == 5e3);
    CHECK(p.levels.v_read == 0.15);
    CHECK(p.device.r_off == SimParams{}.device.r_off); // untouched
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(magic::parse_params("no_such_key = 1\n"), magic::ParseError);
    CHECK_THROWS_AS(magic::parse_params("r_on 4000\n"), magic::ParseError);
    CHECK_THROWS_AS(magic::parse_params("r_on = banana\n"), magic::ParseError);
    CHECK_THROWS_AS(magic::parse_params("= 4\n"), magic::ParseError);
}

TEST_CASE("merged result is validated") {
    CHECK_THROWS_AS(magic::parse_params("r_on = 1e9\n"), magic::ValidationError);
    CHECK_THROWS_AS(magic::parse_params("v_read = 1.5\n"), magic::ValidationError);
    CHECK_THROWS_AS(magic::parse_params("dt = 1e-9\n"), magic::ValidationError);
    CHECK_THROWS_AS(magic::parse_params("kcl_abs_tol = 0\n"), magic::ValidationError);
    CHECK_THROWS_AS(magic::parse_params("pulse_width = 1e-12\n"),
                    magic::ValidationError);
}

TEST_CASE("format/parse round trip covers every recognized key") {
    SimParams p;
    p.device.v_t_set = 1.17;
    p.device.v_t_reset = -0.39;
    p.device.k_set = 3.21e11;
    p.device.k_reset = 9.87e8;
    p.device.alpha_set = 2.0;
    p.device.alpha_reset = 4.0;
    p.device.r_on = 3.3e3;
    p.device.r_off = 7.7e6;
    p.levels.v_input_write = 2.1;
    p.levels.v_init = 2.2;
    p.levels.v_exec = 1.05;
    p.levels.v_read = 0.19;
    p.levels.v_gate_on = 1.9;
    p.levels.v_gate_off = 0.01;
    p.levels.v_reset_write = -0.95;
    p.timing.pulse_width = 1.1e-9;
    p.timing.edge_time = 2e-12;
    p.timing.settle_gap = 0.2e-9;
    p.circuit.r_selector_on = 45.0;
    p.circuit.r_selector_off = 2e10;
    p.circuit.r_row_switch = 12.0;
    p.circuit.dt = 0.4e-12;
    p.circuit.kcl_abs_tol = 2e-12;
    p.circuit.kcl_rel_tol = 3e-9;
    p.circuit.max_newton_iters = 40;

    const auto q = magic::parse_params(magic::format_params(p, "round trip"));
    CHECK(q.device.v_t_set == doctest::Approx(p.device.v_t_set).epsilon(1e-12));
    CHECK(q.device.v_t_reset == doctest::Approx(p.device.v_t_reset).epsilon(1e-12));
    CHECK(q.device.k_set == doctest::Approx(p.device.k_set).epsilon(1e-12));
    CHECK(q.device.k_reset == doctest::Approx(p.device.k_reset).epsilon(1e-12));
    CHECK(q.device.alpha_set == p.device.alpha_set);
    CHECK(q.device.alpha_reset == p.device.alpha_reset);
    CHECK(q.device.r_on == doctest::Approx(p.device.r_on).epsilon(1e-12));
    CHECK(q.device.r_off == doctest::Approx(p.device.r_off).epsilon(1e-12));
    CHECK(q.levels.v_input_write == doctest::Approx(p.levels.v_input_write));
    CHECK(q.levels.v_init == doctest::Approx(p.levels.v_init));
    CHECK(q.levels.v_exec == doctest::Approx(p.levels.v_exec));
    CHECK(q.levels.v_read == doctest::Approx(p.levels.v_read));
    CHECK(q.levels.v_gate_on == doctest::Approx(p.levels.v_gate_on));
    CHECK(q.levels.v_gate_off == doctest::Approx(p.levels.v_gate_off));
    CHECK(q.levels.v_reset_write == doctest::Approx(p.levels.v_reset_write));
    CHECK(q.timing.pulse_width == doctest::Approx(p.timing.pulse_width).epsilon(1e-12));
    CHECK(q.timing.edge_time == doctest::Approx(p.timing.edge_time).epsilon(1e-12));
    CHECK(q.timing.settle_gap == doctest::Approx(p.timing.settle_gap).epsilon(1e-12));
    CHECK(q.circuit.r_selector_on == doctest::Approx(p.circuit.r_selector_on));
    CHECK(q.circuit.r_selector_off == doctest::Approx(p.circuit.r_selector_off));
    CHECK(q.circuit.r_row_switch == doctest::Approx(p.circuit.r_row_switch));
    CHECK(q.circuit.dt == doctest::Approx(p.circuit.dt).epsilon(1e-12));
    CHECK(q.circuit.kcl_abs_tol == doctest::Approx(p.circuit.kcl_abs_tol).epsilon(1e-12));
    CHECK(q.circuit.kcl_rel_tol == doctest::Approx(p.circuit.kcl_rel_tol).epsilon(1e-12));
    CHECK(q.circuit.max_newton_iters == p.circuit.max_newton_iters);
}

TEST_CASE("device-only formatting stays loadable on top of a base") {
    SimParams base;
    base.device.r_off = 1e6;
    const std::string text = magic::format_device_params(base.device, "fitted");
    const auto q = magic::parse_params(text);
    CHECK(q.device.r_off == doctest::Approx(1e6));
    CHECK(text.find("# fitted") != std::string::npos);
}

TEST_CASE("missing file raises an I/O error") {
    CHECK_THROWS_AS(magic::load_params_file("/nonexistent/path.params"),
                    magic::IoError);
}

} // TEST_SUITE
