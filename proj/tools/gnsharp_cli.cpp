#include <iostream>

#include "gnsharp/cli.hpp"

int main(int argc, char** argv) { return gnsharp::run(argc, argv, std::cout, std::cerr); }
