#include <iostream>
#include <string>
#include <vector>

#include "evtms/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return evtms::run_cli(args, std::cout, std::cerr);
}
