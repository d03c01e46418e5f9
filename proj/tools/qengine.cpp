#include <iostream>

#include "qengine/cli.hpp"

int main(int argc, char** argv)
{
    return qengine::run_cli(argc, argv, std::cout, std::cerr);
}
