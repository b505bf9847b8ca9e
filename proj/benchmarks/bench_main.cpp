// Microbenchmarks for the hot paths: device stepping, the row-node solve,
// whole-program simulation, and the text front ends.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "magic/device.hpp"
#include "magic/mapper.hpp"
#include "magic/netlist.hpp"
#include "magic/params_io.hpp"
#include "magic/program.hpp"
#include "magic/simulator.hpp"

namespace {

std::string data_path(const std::string& name) {
    return std::string(MAGIC_DATA_DIR) + "/" + name;
}

magic::ExecutionProgram nor_program() {
    magic::ExecutionProgram p;
    p.row_size = 3;
    p.inputs = {{"a", 0}, {"b", 1}};
    p.outputs = {{"y", 2}};
    magic::MicroOp init;
    init.kind = magic::OpKind::Init;
    init.args = {{"", 2}};
    magic::MicroOp gate;
    gate.kind = magic::OpKind::Nor;
    gate.args = {{"a", 0}, {"b", 1}};
    gate.out = {"y", 2};
    p.cycles = {{"T0", init}, {"T1", gate}};
    return p;
}

void BM_StepState(benchmark::State& state) {
    const magic::VteamParams p;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> xd(0.0, 1.0);
    std::uniform_real_distribution<double> vd(-2.0, 2.0);
    std::vector<std::pair<double, double>> samples(1024);
    for (auto& s : samples) s = {xd(rng), vd(rng)};
    size_t i = 0;
    for (auto _ : state) {
        const auto& [x, v] = samples[i++ & 1023];
        benchmark::DoNotOptimize(magic::step_state(p, {x}, v, 0.5e-12));
    }
}
BENCHMARK(BM_StepState);

void BM_SolveRowVoltage(benchmark::State& state) {
    const magic::SimParams sp;
    magic::CrossbarState xbar;
    xbar.cells = {{1.0}, {0.0}, {0.6}};
    const std::vector<double> v_columns = {1.0, 1.0, 0.0};
    const std::vector<char> gates_on = {1, 1, 1};
    double prev = 0.0;
    for (auto _ : state) {
        const auto sol = magic::solve_row_voltage(
            sp.device, xbar, v_columns, gates_on, false, sp.circuit, prev);
        prev = sol.v_row;
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(BM_SolveRowVoltage);

void BM_RunNorProgram(benchmark::State& state) {
    const magic::SimParams sp;
    const auto prog = nor_program();
    const std::map<std::string, int> bits{{"a", 0}, {"b", 1}};
    for (auto _ : state) {
        auto r = magic::run_program(prog, bits, sp.levels, sp.timing,
                                    sp.device, sp.circuit);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_RunNorProgram)->Unit(benchmark::kMillisecond);

void BM_RunHalfAdder(benchmark::State& state) {
    const magic::SimParams sp;
    const auto prog =
        magic::parse_simpler(magic::read_text_file(data_path("half_adder.json")));
    const std::map<std::string, int> bits{{"A", 1}, {"B", 0}};
    for (auto _ : state) {
        auto r = magic::run_program(prog, bits, sp.levels, sp.timing,
                                    sp.device, sp.circuit);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_RunHalfAdder)->Unit(benchmark::kMillisecond);

void BM_ParseSimpler(benchmark::State& state) {
    const auto text = magic::read_text_file(data_path("half_adder.json"));
    for (auto _ : state) {
        auto p = magic::parse_simpler(text);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_ParseSimpler);

void BM_MapToRow(benchmark::State& state) {
    const auto net =
        magic::parse_netlist(magic::read_text_file(data_path("half_adder.net")));
    for (auto _ : state) {
        auto p = magic::map_to_row(net, std::nullopt);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_MapToRow);

}  // namespace

BENCHMARK_MAIN();
