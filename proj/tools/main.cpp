#include <iostream>

#include "betti/cli/commands.hpp"

int main(int argc, char** argv)
{
    return betti::cli::main_entry(argc, argv, std::cout, std::cerr);
}
