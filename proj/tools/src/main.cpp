#include <iostream>

#include "fracheat/cli/commands.hpp"

int main(int argc, char** argv) { return fracheat::cli::run_cli(argc, argv, std::cout, std::cerr); }
