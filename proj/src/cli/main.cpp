#include <iostream>

#include "justnets/cli.hpp"

int main(int argc, char** argv) {
  return justnets::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
