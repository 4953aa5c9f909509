#include "frameflow/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return frameflow::cli::run(argc, argv, std::cout, std::cerr); }
