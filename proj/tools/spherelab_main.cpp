#include "spherelab/cli_app.hpp"

int main(int argc, char** argv) { return spherelab::run_cli(argc, argv); }
