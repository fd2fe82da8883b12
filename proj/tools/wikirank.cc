#include <iostream>

#include "wikirank/cli.h"

int main(int argc, char **argv) {
  return wikirank::cli::Run(argc, argv, std::cout, std::cerr);
}
