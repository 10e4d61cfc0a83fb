#include "flipmesh_cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return flipmesh::cli::run(argc, argv, std::cout, std::cerr);
}
