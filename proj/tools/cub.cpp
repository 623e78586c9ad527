#include <iostream>
#include <string>
#include <vector>

#include "cub/cli.hpp"

int main(int argc, char** argv) {
  return cub::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
