#include <lck/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return lck::run_cli(argc, argv, std::cout, std::cerr); }
