#include "flucbound/cli.hpp"

int main(int argc, char** argv) { return flucbound::cli_main(argc, argv); }
