#include "cosmoshock/cli.hpp"

int main(int argc, char** argv) { return cosmoshock::cli::run(argc, argv); }
