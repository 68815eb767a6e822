#include "lgsim/cli.hpp"

int main(int argc, char** argv) { return lgsim::run_cli(argc, argv); }
