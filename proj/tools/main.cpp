#include <iostream>

#include "sheetlab/cli.hpp"

int main(int argc, char** argv)
{
  return sheetlab::cli::main(argc, argv, std::cout, std::cerr);
}
