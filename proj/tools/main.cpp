#include <iostream>

#include "magflow/cli.hpp"

int main(int argc, char** argv) {
    return magflow::cli::dispatch(argc, argv, std::cout, std::cerr);
}
