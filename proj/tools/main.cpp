#include "driftgate/cli.hpp"

int main(int argc, char** argv) { return driftgate::run_command(argc, argv); }
