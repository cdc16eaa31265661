#include <iostream>

#include "mdiag/cli.hpp"

int main(int argc, char** argv) { return mdiag::cli::run(argc, argv, std::cout, std::cerr); }
