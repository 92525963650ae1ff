#include "pettis/cli.hpp"

int main(int argc, char** argv) { return pettis::cli_main(argc, argv); }
