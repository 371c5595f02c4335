#include <iostream>

#include "seco/cli.hpp"

int main(int argc, char** argv) {
    return seco::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
