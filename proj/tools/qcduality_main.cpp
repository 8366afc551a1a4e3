#include "qcduality/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qcd::cli::main_entry(argc, argv, std::cout, std::cerr); }
