#include <doctest.h>

#include <map>
#include <string>

#include "magic/errors.hpp"
#include "magic/netlist.hpp"
#include "magic/params_io.hpp"

using magic::GateNetlist;

namespace {

GateNetlist half_adder() {
    return magic::parse_netlist(
        magic::read_text_file(std::string(MAGIC_DATA_DIR) + "/half_adder.net"));
}

} // namespace

TEST_SUITE("netlist") {

TEST_CASE("the shipped half adder has the expected shape") {
    const auto n = half_adder();
    CHECK(n.gates.size() == 5);
    REQUIRE(n.primary_inputs.size() == 2);
    CHECK(n.primary_inputs[0] == "A");
    CHECK(n.primary_inputs[1] == "B");
    REQUIRE(n.primary_outputs.size() == 2);
    CHECK(n.primary_outputs[0] == "S");
    CHECK(n.primary_outputs[1] == "Cout");
}

TEST_CASE("half-adder logic against binary addition") {
    const auto n = half_adder();
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
            const auto vals = evaluate_logic(n, {{"A", a}, {"B", b}});
            CHECK(vals.at("S") == (a ^ b));
            CHECK(vals.at("Cout") == (a & b));
        }
}

TEST_CASE("single NOT") {
    const auto n = magic::parse_netlist("INPUT a\ny = NOT(a)\n");
    CHECK(evaluate_logic(n, {{"a", 0}}).at("y") == 1);
    CHECK(evaluate_logic(n, {{"a", 1}}).at("y") == 0);
}

TEST_CASE("multi-input NOR evaluates as any-high-gives-low") {
    const auto n = magic::parse_netlist(
        "INPUT a\nINPUT b\nINPUT c\ny = NOR(a, b, c)\n");
    for (int mask = 0; mask < 8; ++mask) {
        const int a = (mask >> 2) & 1, b = (mask >> 1) & 1, c = mask & 1;
        const auto vals = evaluate_logic(n, {{"a", a}, {"b", b}, {"c", c}});
        CHECK(vals.at("y") == ((a | b | c) ? 0 : 1));
    }
}

TEST_CASE("self-reference is a cycle error") {
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\nS = NOT(S)\n"), magic::ParseError);
}

TEST_CASE("unknown operand is rejected") {
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\ny = NOR(a, Z)\n"),
                    magic::ParseError);
}

TEST_CASE("forward references count as cycles") {
    CHECK_THROWS_AS(
        magic::parse_netlist("INPUT a\nx = NOT(y)\ny = NOT(a)\n"),
        magic::ParseError);
}

TEST_CASE("duplicate definitions are rejected") {
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\nINPUT a\n"), magic::ParseError);
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\ny = NOT(a)\ny = NOT(a)\n"),
                    magic::ParseError);
    CHECK_THROWS_AS(
        magic::parse_netlist("INPUT a\nOUTPUT y\nOUTPUT y\ny = NOT(a)\n"),
        magic::ParseError);
}

TEST_CASE("declared outputs must exist") {
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\nOUTPUT nope\ny = NOT(a)\n"),
                    magic::ParseError);
}

TEST_CASE("parenthesized header style is accepted") {
    const auto n = magic::parse_netlist(
        "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOR(a, b)\n");
    CHECK(n.primary_inputs.size() == 2);
    CHECK(n.primary_outputs.size() == 1);
}

TEST_CASE("comments and blank lines are ignored") {
    const auto n = magic::parse_netlist(
        "# a half gate\n\nINPUT a   # trailing\n\ny = NOT(a)\n");
    CHECK(n.gates.size() == 1);
}

TEST_CASE("undeclared outputs default to the unconsumed gate outputs") {
    const auto n = magic::parse_netlist(
        "INPUT a\nx = NOT(a)\ny = NOT(x)\nz = NOR(a, x)\n");
    REQUIRE(n.primary_outputs.size() == 2);
    CHECK(n.primary_outputs[0] == "y");
    CHECK(n.primary_outputs[1] == "z");
}

TEST_CASE("gate arity is enforced") {
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\ny = NOT(a, a)\n"),
                    magic::ParseError);
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\ny = NOR(a)\n"),
                    magic::ParseError);
    CHECK_THROWS_AS(magic::parse_netlist("INPUT a\ny = NAND(a, a)\n"),
                    magic::ParseError);
}

TEST_CASE("missing input value is a validation error") {
    const auto n = magic::parse_netlist("INPUT a\nINPUT b\ny = NOR(a, b)\n");
    CHECK_THROWS_AS(evaluate_logic(n, {{"a", 1}}), magic::ValidationError);
}

} // TEST_SUITE
