#include "etl/cli.hpp"

int main(int argc, char** argv) { return etl::cli::run(argc, argv); }
