#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "magic/params_io.hpp"
#include "magic/program.hpp"
#include "magic/report.hpp"
#include "magic/simulator.hpp"

using magic::CoarseModel;
using magic::RunSummary;

namespace {

magic::ExecutionProgram listing_program() {
    return magic::parse_simpler(
        magic::read_text_file(std::string(MAGIC_DATA_DIR) + "/half_adder.json"));
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("coarse estimator reproduces the published literature numbers") {
    // c17 as 7 NOT + 6 NOR with the pulse-mode averages.
    const double c17 = magic::coarse_estimate(7, 6, CoarseModel::pulse());
    CHECK(c17 == doctest::Approx(648.21e-15).epsilon(1e-9));
    CHECK(std::abs(c17 - 0.655e-12) / 0.655e-12 < 0.02);

    // c432 as 101 NOT + 148 NOR.
    const double c432 = magic::coarse_estimate(101, 148, CoarseModel::pulse());
    CHECK(std::abs(c432 - 12.31e-12) / 12.31e-12 < 0.05);

    CHECK(magic::coarse_estimate(0, 0, CoarseModel::pulse()) == 0.0);
}

TEST_CASE("both published average models are available") {
    CHECK(CoarseModel::pulse().avg_not_energy == doctest::Approx(46.53e-15));
    CHECK(CoarseModel::pulse().avg_nor_energy == doctest::Approx(53.75e-15));
    CHECK(CoarseModel::dc().avg_not_energy == doctest::Approx(47.31e-15));
    CHECK(CoarseModel::dc().avg_nor_energy == doctest::Approx(55.04e-15));
}

TEST_CASE("coarse estimator is linear in the gate counts") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> count(0, 500);
    const auto m = CoarseModel::pulse();
    for (int trial = 0; trial < 50; ++trial) {
        const long a_not = count(rng), a_nor = count(rng);
        const long b_not = count(rng), b_nor = count(rng);
        const double split = magic::coarse_estimate(a_not, a_nor, m) +
                             magic::coarse_estimate(b_not, b_nor, m);
        const double joint = magic::coarse_estimate(a_not + b_not, a_nor + b_nor, m);
        CHECK(joint == doctest::Approx(split).epsilon(1e-12));
    }
}

TEST_CASE("comparison table rendering") {
    RunSummary row;
    row.benchmark = "half_adder";
    row.pattern = "alt";
    row.n_pi = 2;
    row.n_po = 2;
    row.cycles = 9;
    row.n_not = 2;
    row.n_nor = 3;
    row.coarse = 254.31e-15;
    row.e_input_load = 1078.9967e-15;
    row.e_init = 5529.2760e-15;
    row.e_exec = 1.9512e-15;
    row.e_read = 25.0968e-15;

    SUBCASE("single row with ratio columns") {
        const auto text = magic::render_comparison({row});
        CHECK(text.find("half_adder") != std::string::npos);
        CHECK(text.find("alt") != std::string::npos);
        CHECK(text.find("\xc3\x97") != std::string::npos); // the multiplication sign
        CHECK(text.find("init_fJ") != std::string::npos);
        // Folded view: init column includes the input load.
        CHECK(text.find("6608.2727") != std::string::npos);
    }
    SUBCASE("unfolded view separates the load column") {
        const auto text = magic::render_comparison({row}, false);
        CHECK(text.find("load_fJ") != std::string::npos);
        CHECK(text.find("1078.9967") != std::string::npos);
        CHECK(text.find("5529.2760") != std::string::npos);
    }
    SUBCASE("empty input renders the header only") {
        const auto text = magic::render_comparison({});
        CHECK(text.find("benchmark") != std::string::npos);
        CHECK(text.find("half_adder") == std::string::npos);
    }
    SUBCASE("csv emission") {
        const auto csv = magic::render_comparison_csv({row});
        CHECK(csv.rfind("benchmark,pattern,", 0) == 0);
        CHECK(csv.find("half_adder,alt,") != std::string::npos);
    }
    SUBCASE("ratio semantics with and without folding") {
        const double folded = row.init_exec_ratio(true);
        const double raw = row.init_exec_ratio(false);
        CHECK(folded ==
              doctest::Approx((row.e_init + row.e_input_load) / row.e_exec));
        CHECK(raw == doctest::Approx(row.e_init / row.e_exec));
    }
}

TEST_CASE("per-run energy report text and json") {
    const auto p = listing_program();
    const auto r = magic::run_program(p, {{"A", 1}, {"B", 0}}, {}, {}, {}, {});

    const auto text = magic::render_energy_report(r.report, p, r.readouts);
    CHECK(text.find("input load") != std::string::npos);
    CHECK(text.find("init") != std::string::npos);
    CHECK(text.find("exec") != std::string::npos);
    CHECK(text.find("read") != std::string::npos);
    CHECK(text.find("S") != std::string::npos);
    CHECK(text.find("READ") != std::string::npos);

    const auto doc = nlohmann::json::parse(
        magic::energy_report_json(r.report, p, r.readouts));
    REQUIRE(doc.contains("cycles"));
    REQUIRE(doc.contains("per_cell_category_j"));
    REQUIRE(doc.contains("totals_j"));
    REQUIRE(doc.contains("readouts"));
    CHECK(doc["cycles"].size() == 9);
    CHECK(doc["readouts"]["S"] == 1);
    CHECK(doc["readouts"]["Cout"] == 0);

    // Category totals in the document sum to the device grand total.
    const auto& totals = doc["totals_j"];
    const double sum = totals["input_load"].get<double>() +
                       totals["init"].get<double>() +
                       totals["exec"].get<double>() + totals["read"].get<double>();
    CHECK(sum == doctest::Approx(totals["device_total"].get<double>()).epsilon(1e-9));

    // KCL bookkeeping is surfaced.
    REQUIRE(doc.contains("kcl"));
    CHECK(doc["kcl"]["max_residual_ratio"].get<double>() <= 1.0);
}

} // TEST_SUITE
