// main.cpp: tpdicke command-line entry point

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tpdicke::cli::run(argc, argv, std::cout, std::cerr); }
