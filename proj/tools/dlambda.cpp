#include <iostream>

#include "dlambda/cli.hpp"

int main(int argc, char** argv)
{
    return dlambda::run_cli(argc, argv, std::cout, std::cerr);
}
