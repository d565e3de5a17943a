#include <iostream>

#include "toposprob/cli.hpp"

int main(int argc, char **argv) { return toposprob::cli::run(argc, argv, std::cout, std::cerr); }
