#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <curvebetti/cli.hpp>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return curvebetti::cli::run(args, std::cout, std::cerr, isatty(fileno(stdout)) != 0);
}
