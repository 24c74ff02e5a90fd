#include <iostream>

#include "steenrod/cli.hpp"

int main(int argc, char** argv)
{
    return steenrod::run_cli(argc, argv, std::cout, std::cerr);
}
