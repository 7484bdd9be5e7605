#pragma once

#include <memory>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace spherelab {

// Exit codes: 0 ok, 2 usage, 3 domain error, 4 resource/guard, 5 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitGuard = 4;
inline constexpr int kExitIo = 5;

struct CliState;

// Builds the full CLI11 application (all subcommands wired to callbacks that
// read/write through `state`). Exposed separately so tests can inspect the
// flag surface of every subcommand.
std::unique_ptr<CLI::App> build_cli(CliState& state);

struct CliState {
    // globals
    std::string out_dir = "out";
    std::string table_cache;  // empty = no cache
    std::uint64_t seed = 12345;
    int threads = 0;
    bool svg = false;

    // shared operation parameters (bound by the subcommands that use them)
    int dim = 3;
    std::int64_t lambda = 1;
    std::int64_t lambda_max = -1;
    int arity = 2;
    std::string xi_text = "0";
    std::int64_t q_max = 0;
    std::int64_t big_n = 8;
    double theta = 0.0;
    std::int64_t gauss_l = 0, gauss_a = 1, gauss_q = 3;
    std::string form = "main";
    std::vector<std::string> fn_specs;
    std::string sizes_text = "2,4,8,16";
    double p_exp = 2.0, q_exp = 2.0, r_exp = 1.0;
    int sharp_n = 1;
    std::int64_t r_max = 60;
    std::string n_list_text = "32,64,128,256,512";
    std::string lambda_list_text = "25,41";
    int xi_points = 41;
    std::int64_t big_q = 100000;
    std::string family = "box";
    std::string triples_text = "2,2,1";   // p,q,r per triple, ';' separated
    int samples = 256;
};

int run_cli(int argc, const char* const* argv);

}  // namespace spherelab
