#include "traceexpr_cli/app.hpp"

#include <iostream>

int main(int argc, char **argv) { return traceexpr::cli::run(argc, argv, std::cout, std::cerr); }
