#include "commands.hpp"

int main(int argc, char** argv) { return memkernel::cli::run(argc, argv); }
