#include <iostream>

#include "peh/commands.hpp"

int main(int argc, char** argv) { return peh::cli::run(argc, argv, std::cout, std::cerr); }
