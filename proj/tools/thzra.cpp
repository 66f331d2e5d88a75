#include <iostream>

#include "thzra/app/cli.hpp"

int main(int argc, char** argv)
{
    return thzra::app::run_cli(argc, argv, std::cout, std::cerr);
}
