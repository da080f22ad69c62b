#include <iostream>

#include "lorenz_lab/cli.hpp"

int main(int argc, char** argv) { return lorenz_lab::run_cli(argc, argv, std::cout, std::cerr); }
