#include <iostream>

#include "passivity/cli.h"

int main(int argc, char** argv) {
  return passivity::run(argc, argv, std::cout, std::cerr);
}
