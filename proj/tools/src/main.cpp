#include <iostream>

#include "dpcm_cli/app.hpp"

int main(int argc, char** argv) { return dpcm::cli::run(argc, argv, std::cout, std::cerr); }
