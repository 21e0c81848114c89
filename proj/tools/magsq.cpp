#include <iostream>

#include "magsq/cli.hpp"

int main(int argc, char** argv) {
  return magsq::run_cli(argc, argv, std::cout, std::cerr);
}
