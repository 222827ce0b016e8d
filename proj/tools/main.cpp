#include "wlra/bench.hpp"

int main(int argc, char** argv) { return wlra::run_cli(argc, argv); }
