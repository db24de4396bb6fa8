#include "mva/cli.hpp"

int main(int argc, char** argv) { return mva::cli::run(argc, argv); }
