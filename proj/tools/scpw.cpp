#include "scpw/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return scpw::run_cli(argc, argv, std::cout, std::cerr);
}
