#include "singode/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return singode::run_cli(argc, argv, std::cout, std::cerr); }
