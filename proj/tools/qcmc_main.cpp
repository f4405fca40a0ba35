#include "qcmc/cli.hpp"

int main(int argc, char** argv) { return qcmc::run_cli(argc, argv); }
