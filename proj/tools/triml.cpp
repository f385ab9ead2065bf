#include <iostream>

#include "triml/cli.hpp"

int main(int argc, char** argv) { return triml::run_cli(argc, argv, std::cout, std::cerr); }
