#include <iostream>

#include "ncsurf/cli/app.hpp"

int main(int argc, char** argv) { return ncsurf::cli::run(argc, argv, std::cout, std::cerr); }
