#include "roughcb/cli.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv)
{
    try
    {
        return roughcb::cli::run(argc, argv, std::cout, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "roughcb: " << e.what() << "\n";
        return 4;
    }
}
