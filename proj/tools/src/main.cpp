#include "jetphase_cli/commands.hpp"

int main(int argc, char** argv) { return jetphase::cli::run_cli(argc, argv); }
