#include <iostream>

#include "ptdoublet/cli.hpp"

int main(int argc, char** argv) { return ptdoublet::cli::run(argc, argv, std::cout, std::cerr); }
