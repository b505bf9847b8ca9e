#include <doctest.h>

#include <map>
#include <string>

#include "magic/params_io.hpp"
#include "magic/program.hpp"
#include "magic/spice.hpp"
#include "magic/waveform.hpp"

using magic::ExecutionProgram;
using magic::SimParams;

namespace {

ExecutionProgram listing_program() {
    return magic::parse_simpler(
        magic::read_text_file(std::string(MAGIC_DATA_DIR) + "/half_adder.json"));
}

int count_of(const std::string& text, const std::string& needle) {
    int n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_SUITE("spice") {

TEST_CASE("deck emission is deterministic to the byte") {
    const auto p = listing_program();
    const SimParams sp;
    const auto schedule =
        magic::build_schedule(p, {{"A", 1}, {"B", 0}}, sp.levels, sp.timing);
    const auto a = magic::emit_deck(p, schedule, sp, "golden");
    const auto b = magic::emit_deck(p, schedule, sp, "golden");
    CHECK(a.deck == b.deck);
    REQUIRE(a.sidecars.size() == b.sidecars.size());
    for (size_t i = 0; i < a.sidecars.size(); ++i) {
        CHECK(a.sidecars[i].filename == b.sidecars[i].filename);
        CHECK(a.sidecars[i].content == b.sidecars[i].content);
    }
}

TEST_CASE("one device instance and one column source per cell") {
    const auto p = listing_program();
    const SimParams sp;
    const auto schedule =
        magic::build_schedule(p, {{"A", 1}, {"B", 0}}, sp.levels, sp.timing);
    const auto deck = magic::emit_deck(p, schedule, sp, "ha");

    for (int k = 0; k < 5; ++k) {
        CHECK(count_of(deck.deck, "Xmem" + std::to_string(k) + " ") == 1);
        CHECK(count_of(deck.deck, "Vcol" + std::to_string(k) + " ") == 1);
        CHECK(count_of(deck.deck, "mid" + std::to_string(k) + " ") >= 1);
    }
    CHECK(count_of(deck.deck, "Xmem5") == 0);
    CHECK(count_of(deck.deck, "Vrowctl") == 1);
    CHECK(count_of(deck.deck, ".tran") == 1);
    CHECK(count_of(deck.deck, ".meas tran e_dev") == 5);
    CHECK(deck.deck.find(".end") != std::string::npos);

    // One sidecar per column, per gate line, plus the row control.
    CHECK(deck.sidecars.size() == 11);
    for (const auto& s : deck.sidecars) {
        CHECK(s.filename.rfind("ha_", 0) == 0);
        CHECK(deck.deck.find("\"" + s.filename + "\"") != std::string::npos);
    }
}

TEST_CASE("an empty program still drives the read cycle") {
    ExecutionProgram p;
    p.row_size = 2;
    p.inputs = {{"a", 0}};
    p.outputs = {{"a", 0}};
    const SimParams sp;
    const auto schedule = magic::build_schedule(p, {{"a", 0}}, sp.levels, sp.timing);
    const auto deck = magic::emit_deck(p, schedule, sp, "empty");
    CHECK(count_of(deck.deck, "Xmem") == 2);
    // The column waveform is just the read pulse.
    for (const auto& s : deck.sidecars) {
        if (s.filename.find("col") == std::string::npos) continue;
        CHECK(s.content.find("2.00000e-01") != std::string::npos);
        CHECK(s.content.find("2.00000e+00") == std::string::npos);
    }
}

TEST_CASE("pwl text format") {
    magic::PwlWaveform w;
    w.breakpoints = {{0.0, 0.0}, {1e-12, 2.0}};
    const auto text = magic::emit_pwl_file(w);
    CHECK(text == "0.00000e+00 0.00000e+00\n1.00000e-12 2.00000e+00\n");
    CHECK(magic::emit_pwl_file(magic::PwlWaveform{}).empty());
}

TEST_CASE("global waveforms place each cycle at its absolute offset") {
    const auto p = listing_program();
    const SimParams sp;
    const auto schedule =
        magic::build_schedule(p, {{"A", 1}, {"B", 0}}, sp.levels, sp.timing);

    // Cell 0 (input A) is driven during input load (first cycle) and during
    // the exec cycles that read it, then at read time.
    const auto col0 = magic::global_column_waveform(schedule, sp.timing, 0);
    REQUIRE(!col0.breakpoints.empty());
    CHECK(col0.breakpoints.front().first == 0.0);
    CHECK(magic::pwl_value(col0, 0.65e-9) == doctest::Approx(2.0));  // load
    const double cycle_span = sp.timing.pulse_width + sp.timing.settle_gap;
    CHECK(magic::pwl_value(col0, 1.5 * cycle_span) == 0.0);          // T0: not driven
    CHECK(magic::pwl_value(col0, 2.5 * cycle_span) == doctest::Approx(1.0)); // T1 exec

    // Strictly increasing time points.
    for (size_t i = 1; i < col0.breakpoints.size(); ++i)
        CHECK(col0.breakpoints[i].first > col0.breakpoints[i - 1].first);

    // Gate control for cell 2 is high during T0 (init of cell 2).
    const auto gate2 =
        magic::global_gate_waveform(schedule, sp.timing, sp.levels, 2);
    CHECK(magic::pwl_value(gate2, 1.5 * cycle_span) == doctest::Approx(2.0));
    CHECK(magic::pwl_value(gate2, 0.5 * cycle_span) == 0.0); // off during load

    // Row control: closed (high) for grounded cycles, open during exec.
    const auto row = magic::global_row_control_waveform(schedule, sp.timing, sp.levels);
    CHECK(magic::pwl_value(row, 0.5 * cycle_span) == doctest::Approx(2.0));  // load
    CHECK(magic::pwl_value(row, 2.5 * cycle_span) == 0.0);                   // exec T1
    CHECK(magic::pwl_value(row, 8.5 * cycle_span) == doctest::Approx(2.0));  // read
}

TEST_CASE("deck text embeds the device parameters") {
    const auto p = listing_program();
    const SimParams sp;
    const auto schedule =
        magic::build_schedule(p, {{"A", 0}, {"B", 0}}, sp.levels, sp.timing);
    const auto deck = magic::emit_deck(p, schedule, sp, "params");
    CHECK(deck.deck.find("ron=4.00000e+03") != std::string::npos);
    CHECK(deck.deck.find("roff=2.00000e+07") != std::string::npos);
    CHECK(deck.deck.find("vtset=1.20000e+00") != std::string::npos);
    CHECK(deck.deck.find("vtrst=-4.00000e-01") != std::string::npos);
    CHECK(deck.deck.find(".subckt vteam_cell") != std::string::npos);
}

} // TEST_SUITE
