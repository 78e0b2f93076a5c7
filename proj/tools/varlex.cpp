#include "varlex/cli.hpp"

int main(int argc, char** argv) { return varlex::cli::run(argc, argv); }
