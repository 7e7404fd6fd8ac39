#include <iostream>

#include "bcurv/cli.hpp"

int main(int argc, char** argv) { return bcurv::cli::run(argc, argv, std::cout, std::cerr); }
