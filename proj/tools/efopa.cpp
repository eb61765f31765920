#include <iostream>
#include <string>
#include <vector>

#include "efopa/commands.hpp"

int main(int argc, char** argv) {
    return efopa::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
