#include "dirac1d/cli.hpp"

int main(int argc, char** argv) { return dirac1d::run_cli(argc, argv); }
