#include <qvertex/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return qvertex::cli::run(argc, argv, std::cout, std::cerr);
}
