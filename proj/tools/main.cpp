#include <iostream>
#include <string>
#include <vector>

#include "lastmile/cli.h"

int main(int argc, char** argv) {
  return lastmile::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
