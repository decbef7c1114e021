#include <iostream>

#include "hitchin/cli.hpp"

int main(int argc, char** argv) {
  return hitchin::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
