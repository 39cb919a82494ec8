#include "armlab/cli.hpp"

int main(int argc, char** argv) { return armlab::cli_main(argc, argv); }
