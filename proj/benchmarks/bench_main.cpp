#include <benchmark/benchmark.h>

// Own entry point: the packaged benchmark_main archive carries LTO bytecode from another compiler release.
BENCHMARK_MAIN();
