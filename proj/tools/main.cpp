#include "thickflow/cli.hpp"

int main(int argc, char** argv) { return thickflow::run_cli(argc, argv); }
