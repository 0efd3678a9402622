#include <iostream>

#include "captchalab/cli/cli.hpp"

int main(int argc, char** argv) {
  return captchalab::cli::run(argc, argv, std::cout, std::cerr);
}
