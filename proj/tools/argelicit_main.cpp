#include <iostream>

#include "argelicit/cli.hpp"

int main(int argc, char** argv) { return argelicit::cli::cli_main(argc, argv, std::cout, std::cerr); }
