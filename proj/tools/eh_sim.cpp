#include <iostream>

#include "ehsim/cli.hpp"

int main(int argc, char** argv) { return ehsim::cli::run_cli(argc, argv, std::cout, std::cerr); }
