#include "pathforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return pathforge::cli::run(argc, argv, std::cout, std::cerr);
}
