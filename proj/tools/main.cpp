#include <iostream>
#include <string>
#include <vector>

#include "cusp_ledger/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cusp::cli::run(args, std::cout, std::cerr);
}
