#include "hdn/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hdn::run_cli(argc, argv, std::cout, std::cerr);
}
