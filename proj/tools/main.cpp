#include <iostream>

#include "homcover/cli.hpp"

int main(int argc, char** argv) { return homcover::cli::dispatch(argc, argv, std::cout, std::cerr); }
