#include <iostream>
#include <string>
#include <vector>

#include "opfact/cli.hpp"

int main(int argc, char** argv) {
    return opfact::cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
