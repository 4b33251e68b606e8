#include "didcont/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return didcont::run_cli(argc, argv, std::cout, std::cerr);
}
