#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    ancilla::cli::Outcome outcome = ancilla::cli::run_command_line(args);
    std::cout << outcome.out;
    std::cerr << outcome.err;
    return outcome.code;
}
