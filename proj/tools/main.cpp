#include <iostream>

#include "colorcache/cli.hpp"

int main(int argc, char **argv) { return colorcache::cli_main(argc, argv, std::cout, std::cerr); }
