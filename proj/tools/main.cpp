#include "tilerank/cli.hpp"

int main(int argc, char** argv) { return tilerank::cli_main(argc, argv); }
