#include <iostream>

#include "fcm/cli.hpp"

int main(int argc, char** argv) { return fcm::cli::run(argc, argv, std::cout, std::cerr); }
