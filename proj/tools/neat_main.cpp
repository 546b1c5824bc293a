#include "neat/cli.hpp"

int main(int argc, char** argv) { return neat::cli_main(argc, argv); }
