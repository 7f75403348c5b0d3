#include <iostream>

#include "thetablock/cli.hpp"

int main(int argc, char** argv) {
  return thetablock::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
