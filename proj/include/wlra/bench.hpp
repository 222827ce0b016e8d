#ifndef WLRA_BENCH_HPP
#define WLRA_BENCH_HPP

#include <string>
#include <vector>

namespace wlra {

// Entry point behind the command line tool; exposed so tests can drive the
// subcommands in-process. Returns the process exit code: 0 on success, 1 on
// usage errors, 2 on runtime or numerical failures.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace wlra

#endif
