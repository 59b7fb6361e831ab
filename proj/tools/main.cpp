#include <iostream>

#include "dancer/cli/run.hpp"

int main(int argc, char** argv) { return dancer::cli::main_entry(argc, argv, std::cout, std::cerr); }
