#include <iostream>

#include "noisygd/cli.hpp"

int main(int argc, char** argv) {
  return noisygd::cli::run(argc, argv, std::cout, std::cerr);
}
