#include <iostream>

#include "bknn/cli/app.hpp"

int main(int argc, char **argv) {
  return bknn::cli::cli_main(argc, argv, std::cout, std::cerr);
}
