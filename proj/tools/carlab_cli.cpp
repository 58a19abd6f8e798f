#include <iostream>

#include "carlab/app/commands.hpp"

int main(int argc, char** argv) { return carlab::app::main_entry(argc, argv, std::cout, std::cerr); }
