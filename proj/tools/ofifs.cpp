#include <iostream>

#include "ofifs/cli.hpp"

int main(int argc, char** argv) {
  return ofifs::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
